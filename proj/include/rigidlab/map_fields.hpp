#pragma once

// Continuous piecewise-multilinear maps from a source chart grid into a
// target chart, and the per-quadrature-point data every functional consumes.

#include "rigidlab/geometry_fields.hpp"
#include "rigidlab/quadrature.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rigidlab {

enum class BoundaryMask { none, boundary, all };

class DiscreteMap {
 public:
  /// `values` holds dim components per node, node-major.
  DiscreteMap(ChartGrid source, std::vector<double> values, std::vector<std::uint8_t> boundary_mask);

  static DiscreteMap sample(const ChartGrid& source, const std::function<Vec(const Vec&)>& fn,
                            BoundaryMask mask = BoundaryMask::boundary);
  static DiscreteMap identity(const ChartGrid& source, BoundaryMask mask = BoundaryMask::boundary);

  const ChartGrid& source() const { return source_; }
  int dim() const { return source_.dim(); }
  std::size_t node_count() const { return source_.node_count(); }

  Vec value(std::size_t node) const;
  void set_value(std::size_t node, const Vec& v);
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool constrained(std::size_t node) const { return mask_[node] != 0; }
  const std::vector<std::uint8_t>& boundary_mask() const { return mask_; }
  void set_boundary_mask(std::vector<std::uint8_t> mask);

  /// Interpolated value at local coordinates xi in [0,1]^d of `cell`.
  Vec evaluate(std::size_t cell, const Vec& xi) const;

 private:
  ChartGrid source_;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

/// Df at local point xi of `cell` from multilinear shape gradients.
LinMapMatrix differential_at(const DiscreteMap& f, std::size_t cell, const Vec& xi);
LinMapMatrix differential_at(const DiscreteMap& f, std::size_t cell, const CellQuadrature& quad, int q);

enum class ChartPolicy { strict, clamp };

struct QuadPointJet {
  Vec x;              ///< source point
  Vec y;              ///< f(x), clamped into the target chart when `clamped`
  double weight = 0;  ///< Gauss weight * cell volume * sqrt(det G)
  MetricMatrix G = MetricMatrix::identity(1);
  MetricMatrix Hf = MetricMatrix::identity(1);
  LinMapMatrix Df;
  bool clamped = false;
};

/// Assembles the jet of f at quadrature point q of `cell`. Under
/// ChartPolicy::strict a mapped point outside h's chart throws ChartError.
QuadPointJet make_jet(const DiscreteMap& f, const MetricField& g, const MetricField& h, std::size_t cell,
                      const CellQuadrature& quad, int q, ChartPolicy policy = ChartPolicy::strict);

/// (f*h)_ij = d_i f^a d_j f^b h_ab(f(x)).
MetricMatrix pullback_metric_at(const DiscreteMap& f, const MetricField& h, std::size_t cell,
                                const CellQuadrature& quad, int q);

/// dist(Df, SO(G, Hf)).
double pointwise_distortion(const QuadPointJet& jet);

/// Doubles the resolution by multilinear interpolation. Fine nodes are
/// constrained when every coarse corner they interpolate from is constrained.
DiscreteMap refine(const DiscreteMap& f);

// JSON: {"grid": {"lower", "upper", "nodes"}, "dim", "values": [flat, node-major], "boundary_mask"}
void to_json(nlohmann::json& j, const ChartGrid& grid);
ChartGrid chart_grid_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const DiscreteMap& f);
DiscreteMap discrete_map_from_json(const nlohmann::json& j);

}  // namespace rigidlab
