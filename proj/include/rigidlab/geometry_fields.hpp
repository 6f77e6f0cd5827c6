#pragma once

// Single-chart Riemannian manifolds: a rectangular coordinate box sampled by a
// uniform grid, and a metric-valued function on it.

#include "rigidlab/tensor_algebra.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rigidlab {

inline constexpr int kMaxChartDim = 3;

/// A point was outside the chart it was evaluated on.
class ChartError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

using MultiIndex = std::array<int, kMaxChartDim>;

/// Uniform tensor-product grid on [lower, upper] in chart coordinates.
/// Node numbering is axis-0 fastest: index = i0 + n0 * (i1 + n1 * i2).
class ChartGrid {
 public:
  ChartGrid(const Vec& lower, const Vec& upper, std::vector<int> nodes);

  /// Unit box [0,1]^dim with `nodes` nodes on every axis.
  static ChartGrid unit(int dim, int nodes);
  static ChartGrid box(const Vec& lower, const Vec& upper, int nodes_per_axis);

  int dim() const { return dim_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  int nodes(int axis) const { return nodes_[axis]; }
  int cells(int axis) const { return nodes_[axis] - 1; }
  const std::vector<int>& node_counts() const { return nodes_; }
  double spacing(int axis) const { return spacing_(axis); }
  const Vec& spacing_vector() const { return spacing_; }
  double cell_volume() const;
  double box_volume() const;

  std::size_t node_count() const { return node_count_; }
  std::size_t cell_count() const { return cell_count_; }
  int corners_per_cell() const { return 1 << dim_; }

  MultiIndex node_multi_index(std::size_t node) const;
  std::size_t node_index(const MultiIndex& idx) const;
  MultiIndex cell_multi_index(std::size_t cell) const;
  Vec node_position(std::size_t node) const;
  Vec cell_origin(std::size_t cell) const;
  Vec cell_center(std::size_t cell) const;
  /// Node index of corner `c` of `cell`; bit k of `c` selects the upper side along axis k.
  std::size_t cell_corner(std::size_t cell, int corner) const;
  bool is_boundary_node(std::size_t node) const;

  bool contains(const Vec& x, double tol = 1e-12) const;
  Vec clamp(const Vec& x) const;

  /// Same box, 2 * cells per axis.
  ChartGrid refined() const;

  bool operator==(const ChartGrid& other) const;

 private:
  int dim_;
  Vec lower_, upper_, spacing_;
  std::vector<int> nodes_;
  std::size_t node_count_ = 0, cell_count_ = 0;
};

/// Christoffel symbols Gamma^k_{ij}, stored densely for dim <= 3.
struct Christoffel {
  int dim = 0;
  std::array<double, 27> data{};
  double& operator()(int k, int i, int j) { return data[(k * 3 + i) * 3 + j]; }
  double operator()(int k, int i, int j) const { return data[(k * 3 + i) * 3 + j]; }
};

/// Partial derivatives d_k g of a metric field.
struct MetricGradient {
  int dim = 0;
  std::array<Mat, kMaxChartDim> partial;
};

struct MetricField {
  ChartGrid chart;
  std::function<Mat(const Vec&)> metric_fn;
  std::function<Christoffel(const Vec&)> christoffel_fn;      ///< optional closed form
  std::function<MetricGradient(const Vec&)> gradient_fn;      ///< optional closed form
  std::string label;
  bool constant = false;  ///< metric independent of position

  int dim() const { return chart.dim(); }
};

/// Metric at x. Throws ChartError when x lies outside the chart.
MetricMatrix metric_at(const MetricField& field, const Vec& x);
/// No domain check; x must already be inside (or clamped to) the chart.
MetricMatrix metric_at_unchecked(const MetricField& field, const Vec& x);

/// Closed form when available; otherwise central differences of the metric
/// with step spacing/2 per axis. Throws ChartError if the stencil leaves the chart.
Christoffel christoffel_at(const MetricField& field, const Vec& x);
Christoffel christoffel_from_gradient(const Mat& g, const MetricGradient& dg);

/// d_k g at x: closed form when available, else central differences with a
/// step of 1e-6 of the chart extent (clamped inside the chart).
MetricGradient metric_gradient_at(const MetricField& field, const Vec& x);

/// Tensor-product Gauss quadrature of sqrt(det g) over the chart grid cells.
double total_volume(const MetricField& field, int quad_order = 2);

// ---- built-in metrics --------------------------------------------------------

enum class MetricTag { euclidean, sphere_conformal, striped, flat_torus_cell };

struct BuiltinMetric {
  MetricTag tag = MetricTag::euclidean;
  double radius = 1.0;            ///< sphere_conformal
  int stripes = 10;               ///< striped: n
  double epsilon = 0.1;           ///< striped: metric factor on the stripes
  std::optional<double> sigma;    ///< striped: mollifier half-width; default width/4
};

MetricTag parse_metric_tag(const std::string& name);
std::string to_string(MetricTag tag);

/// Builds the field and asserts metric_at is SPD at every order-2 Gauss point
/// of the chart grid.
MetricField make_metric(const BuiltinMetric& spec, const ChartGrid& chart);

MetricField euclidean_metric(const ChartGrid& chart);
/// g(x) = 4 R^4 / (R^2 + |x|^2)^2 * I, the stereographic chart of the radius-R sphere.
MetricField sphere_conformal_metric(const ChartGrid& chart, double radius);
/// g = (1 - (1 - eps) chi) I where chi is the (mollified) indicator of the
/// stripes |x_k - j/n| < 1/(2 n^2), j integer, along every axis k.
MetricField striped_metric(const ChartGrid& chart, int n, double epsilon, double sigma);

/// Node count per axis that puts raw stripe edges on grid lines of [0,1].
int striped_aligned_nodes(int n);

/// Conformal factor of the sphere chart and the mollified stripe indicator,
/// exposed for oracles in tests.
double sphere_conformal_factor(const Vec& x, double radius);
double stripe_indicator_1d(double t, int n, double sigma);

/// Strips closed-form Christoffel symbols and metric gradients, forcing the
/// finite-difference paths.
MetricField without_closed_forms(MetricField field);

}  // namespace rigidlab
