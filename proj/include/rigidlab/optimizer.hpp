#pragma once

// Minimization of the elastic energy over the unconstrained nodal values of a
// discrete map. Constrained (masked) nodes stay at their initial values.

#include "rigidlab/functionals.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rigidlab {

enum class OptMethod { gradient_descent, lbfgs };

OptMethod parse_opt_method(const std::string& name);
std::string to_string(OptMethod m);

struct OptimizerConfig {
  OptMethod method = OptMethod::lbfgs;
  int memory = 10;
  int max_iters = 1000;
  double grad_tol = 1e-8;     ///< on the max-norm of the free gradient
  double energy_tol = 1e-12;  ///< relative decrease per accepted step
  double armijo_c = 1e-4;
  double shrink = 0.5;
  int max_trials = 40;
  std::uint64_t seed = 42;  ///< reserved for randomized restarts; the search itself is deterministic
  EvalOptions eval{};

  /// Throws std::invalid_argument on non-positive tolerances, memory < 1, etc.
  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  std::size_t clamped_points = 0;
};

struct OptimizationTrace {
  std::vector<TraceRow> rows;  ///< row 0 is the starting point
  /// converged | energy_tol | max_iters | stalled
  std::string reason;
  int iterations = 0;

  double final_energy() const { return rows.back().energy; }
  double final_grad_norm() const { return rows.back().grad_norm; }
  bool monotone() const;
};

struct MinimizeResult {
  DiscreteMap map;
  OptimizationTrace trace;
};

/// Best-found minimizer of elastic_energy(., g, h, p) starting from f0.
/// A line search that exhausts its trials ends the run with reason "stalled".
/// Trial points leaving h's chart under the strict policy count as failed trials.
MinimizeResult minimize(const DiscreteMap& f0, const MetricField& g, const MetricField& h, double p,
                        const OptimizerConfig& cfg = {});

}  // namespace rigidlab
