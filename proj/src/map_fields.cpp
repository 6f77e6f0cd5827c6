#include "rigidlab/map_fields.hpp"

#include <cmath>

namespace rigidlab {

DiscreteMap::DiscreteMap(ChartGrid source, std::vector<double> values, std::vector<std::uint8_t> boundary_mask)
    : source_(std::move(source)), values_(std::move(values)), mask_(std::move(boundary_mask)) {
  if (values_.size() != source_.node_count() * static_cast<std::size_t>(source_.dim())) {
    throw DomainError("DiscreteMap: value array does not match the source grid");
  }
  if (mask_.size() != source_.node_count()) {
    throw DomainError("DiscreteMap: boundary mask does not match the source grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("DiscreteMap: non-finite nodal value");
  }
}

DiscreteMap DiscreteMap::sample(const ChartGrid& source, const std::function<Vec(const Vec&)>& fn,
                                BoundaryMask mask) {
  const int d = source.dim();
  std::vector<double> values(source.node_count() * d);
  std::vector<std::uint8_t> m(source.node_count(), 0);
  for (std::size_t n = 0; n < source.node_count(); ++n) {
    const Vec y = fn(source.node_position(n));
    if (y.size() != d) throw DomainError("DiscreteMap::sample: map returned wrong dimension");
    for (int k = 0; k < d; ++k) values[n * d + k] = y(k);
    switch (mask) {
      case BoundaryMask::none: break;
      case BoundaryMask::boundary: m[n] = source.is_boundary_node(n) ? 1 : 0; break;
      case BoundaryMask::all: m[n] = 1; break;
    }
  }
  return DiscreteMap(source, std::move(values), std::move(m));
}

DiscreteMap DiscreteMap::identity(const ChartGrid& source, BoundaryMask mask) {
  return sample(source, [](const Vec& x) { return x; }, mask);
}

Vec DiscreteMap::value(std::size_t node) const {
  const int d = dim();
  return Eigen::Map<const Eigen::VectorXd>(values_.data() + node * d, d);
}

void DiscreteMap::set_value(std::size_t node, const Vec& v) {
  const int d = dim();
  for (int k = 0; k < d; ++k) values_[node * d + k] = v(k);
}

void DiscreteMap::set_boundary_mask(std::vector<std::uint8_t> mask) {
  if (mask.size() != source_.node_count()) throw DomainError("DiscreteMap: mask size mismatch");
  mask_ = std::move(mask);
}

Vec DiscreteMap::evaluate(std::size_t cell, const Vec& xi) const {
  const int d = dim();
  double shape[8];
  CellQuadrature::shape_at(d, xi, shape, nullptr);
  Vec y = Vec::Zero(d);
  for (int a = 0; a < source_.corners_per_cell(); ++a) {
    const std::size_t node = source_.cell_corner(cell, a);
    for (int k = 0; k < d; ++k) y(k) += shape[a] * values_[node * d + k];
  }
  return y;
}

namespace {

// Differences along each edge first, then weights: for a map that is affine
// along the cell edges this is exact whenever the edge differences are.
template <class Grad>
Mat edge_differential(const DiscreteMap& f, std::size_t cell, int corners, Grad&& grad) {
  const int d = f.dim();
  const ChartGrid& grid = f.source();
  const auto vals = f.values();
  Mat Df = Mat::Zero(d, d);
  for (int a = 0; a < corners; ++a) {
    const std::size_t hi = grid.cell_corner(cell, a);
    for (int i = 0; i < d; ++i) {
      if (((a >> i) & 1) == 0) continue;
      const std::size_t lo = grid.cell_corner(cell, a ^ (1 << i));
      const double w = grad(a, i);
      for (int alpha = 0; alpha < d; ++alpha) Df(alpha, i) += w * (vals[hi * d + alpha] - vals[lo * d + alpha]);
    }
  }
  for (int i = 0; i < d; ++i) Df.col(i) /= grid.spacing(i);
  return Df;
}

}  // namespace

LinMapMatrix differential_at(const DiscreteMap& f, std::size_t cell, const Vec& xi) {
  double shape[8], grad[24];
  CellQuadrature::shape_at(f.dim(), xi, shape, grad);
  const int d = f.dim();
  return edge_differential(f, cell, f.source().corners_per_cell(), [&](int a, int i) { return grad[a * d + i]; });
}

LinMapMatrix differential_at(const DiscreteMap& f, std::size_t cell, const CellQuadrature& quad, int q) {
  return edge_differential(f, cell, quad.corners(), [&](int a, int i) { return quad.shape_grad(q, a, i); });
}

QuadPointJet make_jet(const DiscreteMap& f, const MetricField& g, const MetricField& h, std::size_t cell,
                      const CellQuadrature& quad, int q, ChartPolicy policy) {
  const ChartGrid& grid = f.source();
  const int d = f.dim();
  if (g.dim() != d || h.dim() != d) throw DomainError("make_jet: metric dimension mismatch");
  QuadPointJet jet;
  jet.x = grid.cell_origin(cell) + quad.point(q).cwiseProduct(grid.spacing_vector());
  jet.y = Vec::Zero(d);
  const auto vals = f.values();
  for (int a = 0; a < quad.corners(); ++a) {
    const std::size_t node = grid.cell_corner(cell, a);
    const double n = quad.shape(q, a);
    for (int alpha = 0; alpha < d; ++alpha) jet.y(alpha) += n * vals[node * d + alpha];
  }
  jet.Df = differential_at(f, cell, quad, q);
  if (!h.chart.contains(jet.y)) {
    if (policy == ChartPolicy::strict) {
      throw ChartError("mapped point outside the target chart of '" + h.label + "'");
    }
    jet.y = h.chart.clamp(jet.y);
    jet.clamped = true;
  }
  jet.G = MetricMatrix(g.metric_fn(jet.x));
  jet.Hf = MetricMatrix(h.metric_fn(jet.y));
  jet.weight = quad.weight(q) * grid.cell_volume() * std::sqrt(jet.G.det());
  return jet;
}

MetricMatrix pullback_metric_at(const DiscreteMap& f, const MetricField& h, std::size_t cell,
                                const CellQuadrature& quad, int q) {
  const Vec y = f.evaluate(cell, quad.point(q));
  if (!h.chart.contains(y)) throw ChartError("pullback_metric_at: mapped point outside the target chart");
  const Mat Df = differential_at(f, cell, quad, q);
  const Mat P = Df.transpose() * h.metric_fn(y) * Df;
  return MetricMatrix::trusted(0.5 * (P + P.transpose()));
}

double pointwise_distortion(const QuadPointJet& jet) { return dist_to_so(jet.Df, jet.G, jet.Hf); }

DiscreteMap refine(const DiscreteMap& f) {
  const ChartGrid& coarse = f.source();
  const ChartGrid fine = coarse.refined();
  const int d = f.dim();
  std::vector<double> values(fine.node_count() * d, 0.0);
  std::vector<std::uint8_t> mask(fine.node_count(), 1);
  const auto cvals = f.values();
  for (std::size_t n = 0; n < fine.node_count(); ++n) {
    const MultiIndex fi = fine.node_multi_index(n);
    // each axis contributes one coarse index (even) or two halves (odd)
    int parents = 1;
    for (int k = 0; k < d; ++k) parents *= (fi[k] % 2 == 0) ? 1 : 2;
    bool constrained = true;
    for (int p = 0; p < parents; ++p) {
      MultiIndex ci{0, 0, 0};
      double w = 1.0;
      for (int k = 0, bit = 0; k < d; ++k) {
        if (fi[k] % 2 == 0) {
          ci[k] = fi[k] / 2;
        } else {
          ci[k] = (fi[k] - 1) / 2 + ((p >> bit) & 1);
          w *= 0.5;
          ++bit;
        }
      }
      const std::size_t cn = coarse.node_index(ci);
      constrained = constrained && f.constrained(cn);
      for (int a = 0; a < d; ++a) values[n * d + a] += w * cvals[cn * d + a];
    }
    mask[n] = constrained ? 1 : 0;
  }
  return DiscreteMap(fine, std::move(values), std::move(mask));
}

void to_json(nlohmann::json& j, const ChartGrid& grid) {
  std::vector<double> lo(grid.lower().data(), grid.lower().data() + grid.dim());
  std::vector<double> hi(grid.upper().data(), grid.upper().data() + grid.dim());
  j = nlohmann::json{{"lower", lo}, {"upper", hi}, {"nodes", grid.node_counts()}};
}

ChartGrid chart_grid_from_json(const nlohmann::json& j) {
  const auto lo = j.at("lower").get<std::vector<double>>();
  const auto hi = j.at("upper").get<std::vector<double>>();
  auto nodes = j.at("nodes").get<std::vector<int>>();
  if (lo.size() != hi.size()) throw DomainError("grid: lower/upper dimension mismatch");
  return ChartGrid(Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                   Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size())),
                   std::move(nodes));
}

void to_json(nlohmann::json& j, const DiscreteMap& f) {
  nlohmann::json grid;
  to_json(grid, f.source());
  std::vector<int> mask(f.boundary_mask().begin(), f.boundary_mask().end());
  j = nlohmann::json{{"grid", grid},
                     {"dim", f.dim()},
                     {"values", std::vector<double>(f.values().begin(), f.values().end())},
                     {"boundary_mask", mask}};
}

DiscreteMap discrete_map_from_json(const nlohmann::json& j) {
  ChartGrid grid = chart_grid_from_json(j.at("grid"));
  if (j.at("dim").get<int>() != grid.dim()) throw DomainError("map: dim does not match grid");
  auto values = j.at("values").get<std::vector<double>>();
  std::vector<std::uint8_t> mask(grid.node_count(), 0);
  if (j.contains("boundary_mask")) {
    const auto m = j.at("boundary_mask").get<std::vector<int>>();
    if (m.size() != mask.size()) throw DomainError("map: boundary_mask size mismatch");
    for (std::size_t i = 0; i < m.size(); ++i) mask[i] = m[i] != 0 ? 1 : 0;
  }
  return DiscreteMap(std::move(grid), std::move(values), std::move(mask));
}

}  // namespace rigidlab
