#pragma once

// Quadrature residuals of the strong (intrinsic) and weak (embedded) Piola
// identities for discrete maps.

#include "rigidlab/functionals.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rigidlab {

/// One term c * prod_k sin(k_k pi t_k) of a test section, t the box-relative coordinate.
struct SectionMode {
  std::array<int, kMaxChartDim> k{1, 1, 1};
  Vec coef;  ///< one coefficient per component
};

/// A vector field on the source box that vanishes on its boundary: a sum of
/// sine modes times the envelope prod_k 4 t_k (1 - t_k). Either evaluated
/// analytically or replaced by its multilinear nodal interpolant on a grid.
class TestSection {
 public:
  TestSection(Vec lower, Vec upper, int components, std::vector<SectionMode> modes);

  int components() const { return components_; }
  int dim() const { return static_cast<int>(lower_.size()); }
  const std::vector<SectionMode>& modes() const { return modes_; }
  bool nodal() const { return grid_.has_value(); }
  const std::vector<double>& nodal_values() const { return nodal_; }

  /// Analytic value and gradient (components x dim).
  Vec value(const Vec& x) const;
  Mat gradient(const Vec& x) const;

  /// Value and gradient at quadrature point q of `cell`, using the nodal
  /// interpolant when the section has been sampled.
  void evaluate(const ChartGrid& grid, std::size_t cell, const CellQuadrature& quad, int q, const Vec& x,
                Vec& value, Mat& gradient) const;

  /// Multilinear interpolant on `grid`; boundary nodes are set to exactly zero.
  TestSection sampled_on(const ChartGrid& grid) const;

  /// a * s + b * t. Both must share the box and representation.
  friend TestSection combine(double a, const TestSection& s, double b, const TestSection& t);

 private:
  Vec lower_, upper_;
  int components_;
  std::vector<SectionMode> modes_;
  std::optional<ChartGrid> grid_;
  std::vector<double> nodal_;
};

/// Random section with `mode_count` modes, wavenumbers in 1..3, coefficients in [-1, 1].
TestSection make_test_section(const ChartGrid& box, int components, std::uint64_t seed, int mode_count = 4);

/// Isometric embedding of a 2-d target chart into R^D with closed-form data.
struct Embedding {
  std::string label;
  int ambient = 3;
  std::function<Vec(const Vec&)> iota;
  std::function<Mat(const Vec&)> diota;  ///< ambient x dim
  /// Second fundamental form in the convention <A(u,v), n> = <d iota u, d_v n>
  /// for unit normals n (minus the normal part of the second derivative of iota).
  std::function<Vec(const Vec&, const Vec&, const Vec&)> second_fundamental;  ///< (u, v, base point)
  MetricField induced;  ///< pullback of the Euclidean metric, on the target chart
};

/// Inverse stereographic projection from the north pole onto the radius-R
/// sphere; the induced metric is sphere_conformal_metric(chart, R).
Embedding sphere_embedding(double radius, const ChartGrid& chart);
/// x -> (x, 0) into R^(d+1); A = 0.
Embedding plane_embedding(const ChartGrid& chart);

/// Quadrature of (Cof df)_i^a g^ij h_ab (d_j xi^b + d_j f^c Gamma^b_cd xi^d) sqrt|g|.
double strong_piola_residual(const DiscreteMap& f, const TestSection& xi, const MetricField& g,
                             const MetricField& h, const EvalOptions& opts = {});

struct WeakPiolaSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return lhs - rhs; }
};

/// lhs = int g^ij d_a iota (Cof df)_i^a . d_j xi sqrt|g|,
/// rhs = int g^ij A((Cof df)_i, d_j f) . xi sqrt|g|.
/// With use_cof = false, df replaces Cof df (the harmonic-map identity).
WeakPiolaSides weak_piola_residual(const DiscreteMap& f, const TestSection& xi, const MetricField& g,
                                   const Embedding& emb, bool use_cof, const EvalOptions& opts = {});

/// Least-squares slope of log|r| against log h.
double refinement_order(const std::vector<double>& h, const std::vector<double>& residual);

struct ResidualRow {
  int level = 0;
  int cells = 0;
  double h = 0.0;
  double residual = 0.0;
  double order = 0.0;  ///< slope fitted over this and all coarser levels (0 on the first)
};

enum class PiolaCase {
  flat_affine,      ///< strong form, affine map between flat squares, nodal test section
  flat_smooth,      ///< strong form, smooth flat map
  sphere_target,    ///< strong form, flat square into the sphere chart
  weak_cofactor,    ///< weak form with Cof df, flat square into the unit sphere
  weak_isometry,    ///< weak form with df, rotation of a spherical cap
};

PiolaCase parse_piola_case(const std::string& name);
std::string to_string(PiolaCase c);

struct PiolaStudy {
  PiolaCase which;
  std::vector<ResidualRow> rows;
  double order = 0.0;  ///< slope over all levels
  double max_abs_residual = 0.0;
};

/// Residuals at cells = coarse_cells * 2^level, level = 0..levels-1.
PiolaStudy run_piola_study(PiolaCase which, int coarse_cells, int levels, std::uint64_t seed,
                           Exec exec = Exec::parallel);

}  // namespace rigidlab
