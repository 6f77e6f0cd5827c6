#pragma once

// Randomized property suites over the intrinsic linear algebra.

#include "rigidlab/tensor_algebra.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rigidlab {

/// Random instances with controlled conditioning: metric eigenvalues in
/// [0.1, 10], basis changes with singular values in [e^-1, e] and det > 0.
class AlgebraSampler {
 public:
  AlgebraSampler(int dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

  int dim() const { return dim_; }
  Mat matrix(double scale = 1.0);  ///< i.i.d. N(0, scale^2) entries
  Mat rotation();                  ///< Haar-distributed in SO(d)
  MetricMatrix metric();
  Mat positive_basis_change();
  Vec vector();

 private:
  int dim_;
  std::mt19937_64 rng_;
};

struct AlgebraSuiteConfig {
  int dim = 2;
  std::size_t cases = 10000;
  std::size_t fd_cases = 1000;
  std::uint64_t seed = 42;
  /// Negate entry (0,0) of every intrinsic cofactor; the suite must then fail.
  bool inject_cofactor_fault = false;
};

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;  ///< largest observed error measure
  double tolerance = 0.0;
  bool passed() const { return failures == 0; }
};

struct AlgebraSuiteReport {
  int dim = 2;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;
  bool all_passed() const;
};

AlgebraSuiteReport run_algebra_suite(const AlgebraSuiteConfig& cfg);

}  // namespace rigidlab
