#pragma once

// Desk-scale studies built on the library: p,q-convergence of metric
// sequences, grid-graph geodesics, and rigidity runs on flat and spherical
// sources.

#include "rigidlab/optimizer.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rigidlab {

// ---- analytic maps -----------------------------------------------------------

/// Named maps for configs: identity, scale {factor}, rotation {angle},
/// reflection (swap of the first two axes), affine {matrix, offset},
/// bump {amplitude} (x0 += a prod_k sin(pi t_k) on the unit box).
std::function<Vec(const Vec&)> analytic_map(const nlohmann::json& spec, int dim);

// ---- p,q-convergence ---------------------------------------------------------

/// Aligned data for a metric sequence g_n and maps F_n : (M, g) -> (M, g_n)
/// with given inverses.
struct ConvergenceSequence {
  MetricField base;
  std::vector<int> index;  ///< n per entry
  std::vector<MetricField> metrics;
  std::vector<DiscreteMap> maps;
  std::vector<DiscreteMap> inverse_maps;
  std::vector<QuadratureRule> rules;  ///< quadrature used for entry n
};

struct ConvergenceRow {
  int n = 0;
  double forward = 0.0;      ///< || dist(dF_n, SO(g, F_n* g_n)) ||_{L^p(g)}
  double inverse = 0.0;      ///< || dist(dF_n^-1, SO(g_n, F_n^-* g)) ||_{L^p(g_n)}
  double det = 0.0;          ///< || Det dF_n - 1 ||_{L^q(g)}
  double det_inverse = 0.0;  ///< || Det dF_n^-1 - 1 ||_{L^q(g_n)}
};

struct ConvergenceReport {
  double p = 2.0, q = 2.0;
  std::vector<ConvergenceRow> rows;
  /// Least-squares slopes of log norm against log n; NaN when some norm is 0.
  double slope_forward = 0.0, slope_inverse = 0.0, slope_det = 0.0, slope_det_inverse = 0.0;
};

ConvergenceReport pq_convergence_report(const ConvergenceSequence& seq, double p, double q,
                                        Exec exec = Exec::parallel);

/// Identity maps from the Euclidean unit square onto striped(n, eps, sigma).
/// sigma == 0 uses the raw indicator with quadrature sub-cells aligned to the
/// stripe edges; otherwise sigma < 0 selects the default width / 4 and the
/// quadrature resolves the mollification layer.
ConvergenceSequence striped_sequence(const std::vector<int>& ns, double epsilon, double sigma);
/// g_n = Euclidean, F_n = identity.
ConvergenceSequence euclidean_sequence(const std::vector<int>& ns, int cells = 8);

/// Slope of log y against log x by least squares.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- grid geodesics ----------------------------------------------------------

/// Dijkstra on the 8-neighbour graph of a (resolution+1)^2 node grid over the
/// chart box; edge weight |e| sqrt(e_hat^T g(mid) e_hat). Endpoints snap to the
/// nearest node. 2-d charts only.
double graph_geodesic(const MetricField& field, const Vec& a, const Vec& b, int resolution);

// ---- rigidity runs -------------------------------------------------------------

enum class BoundaryKind { identity, rotated, reflected };
BoundaryKind parse_boundary_kind(const std::string& name);
std::string to_string(BoundaryKind k);

struct FlatRunConfig {
  int dim = 2;
  int cells = 16;
  double amplitude = 0.05;  ///< sup-norm of the interior perturbation
  BoundaryKind boundary = BoundaryKind::identity;
  double angle = 0.3;  ///< rotated boundary
  double p = 2.0;
  std::uint64_t seed = 42;
  OptimizerConfig optimizer{};
};

struct FlatRunReport {
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double sup_to_target = 0.0;  ///< max over nodes |f - T x|, T the boundary map
  double sup_to_rigid = 0.0;   ///< max over nodes to the best-fit rigid motion
  double max_distortion = 0.0; ///< max pointwise distortion at Gauss points
  double area = 0.0;
  OptimizationTrace trace;
  DiscreteMap final_map;
};

FlatRunReport rigidity_flat_run(const FlatRunConfig& cfg);

struct SphereRunConfig {
  double cap_side = 0.8;
  double radius = 1.0;
  std::vector<int> resolutions{8, 16, 32};
  double p = 2.0;
  double target_half_width = 5.0;
  int fit_cells = 32;  ///< grid used for the best-fit boundary scale
  std::vector<double> sweep_sides{0.8, 0.6, 0.4, 0.2};
  int sweep_cells = 16;
  OptimizerConfig optimizer{};
};

struct SphereRunRow {
  int cells = 0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  int iterations = 0;
  std::string reason;
};

struct SphereRunReport {
  double boundary_scale = 0.0;  ///< c in the pinned boundary x -> c x
  std::vector<SphereRunRow> rows;
  double ratio = 0.0;  ///< finest / coarsest final energy
  std::vector<std::pair<double, double>> sweep;  ///< (cap side, final energy)
  bool sweep_monotone = false;
};

SphereRunReport rigidity_sphere_run(const SphereRunConfig& cfg);

/// Smooth interior displacement with the given sup-norm over nodes, zero on the boundary.
std::vector<double> smooth_perturbation(const ChartGrid& grid, double amplitude, std::uint64_t seed);

}  // namespace rigidlab
