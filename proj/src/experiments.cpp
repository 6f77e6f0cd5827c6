#include "rigidlab/experiments.hpp"

#include "rigidlab/piola_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace rigidlab {

std::function<Vec(const Vec&)> analytic_map(const nlohmann::json& spec, int dim) {
  const std::string name = spec.is_string() ? spec.get<std::string>() : spec.at("name").get<std::string>();
  auto param = [&](const char* key, double fallback) {
    return spec.is_object() && spec.contains(key) ? spec.at(key).get<double>() : fallback;
  };
  if (name == "identity") return [](const Vec& x) { return x; };
  if (name == "scale") {
    const double c = param("factor", 2.0);
    return [c](const Vec& x) { return Vec(c * x); };
  }
  if (name == "rotation") {
    const double a = param("angle", 0.3);
    const double c = std::cos(a), s = std::sin(a);
    return [c, s](const Vec& x) {
      Vec y = x;
      y(0) = c * x(0) - s * x(1);
      y(1) = s * x(0) + c * x(1);
      return y;
    };
  }
  if (name == "reflection") {
    return [](const Vec& x) {
      Vec y = x;
      std::swap(y(0), y(1));
      return y;
    };
  }
  if (name == "affine") {
    const auto rows = spec.at("matrix").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != dim) throw std::invalid_argument("affine: matrix must be dim x dim");
    Mat A(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (static_cast<int>(rows[i].size()) != dim) throw std::invalid_argument("affine: matrix must be dim x dim");
      for (int j = 0; j < dim; ++j) A(i, j) = rows[i][j];
    }
    Vec b = Vec::Zero(dim);
    if (spec.contains("offset")) {
      const auto off = spec.at("offset").get<std::vector<double>>();
      if (static_cast<int>(off.size()) != dim) throw std::invalid_argument("affine: offset must have dim entries");
      for (int i = 0; i < dim; ++i) b(i) = off[i];
    }
    return [A, b](const Vec& x) { return Vec(A * x + b); };
  }
  if (name == "bump") {
    const double a = param("amplitude", 0.1);
    return [a](const Vec& x) {
      double s = a;
      for (Eigen::Index k = 0; k < x.size(); ++k) s *= std::sin(std::numbers::pi * x(k));
      Vec y = x;
      y(0) += s;
      return y;
    };
  }
  throw std::invalid_argument("unknown map '" + name + "'");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

ConvergenceReport pq_convergence_report(const ConvergenceSequence& seq, double p, double q, Exec exec) {
  const std::size_t m = seq.index.size();
  if (seq.metrics.size() != m || seq.maps.size() != m || seq.inverse_maps.size() != m || seq.rules.size() != m) {
    throw DomainError("pq_convergence_report: sequences are not aligned");
  }
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("pq_convergence_report: p and q must be >= 1");
  ConvergenceReport rep;
  rep.p = p;
  rep.q = q;
  for (std::size_t i = 0; i < m; ++i) {
    const DiscreteMap& F = seq.maps[i];
    const DiscreteMap& Finv = seq.inverse_maps[i];
    if (F.dim() != seq.base.dim() || Finv.dim() != seq.base.dim() || seq.metrics[i].dim() != seq.base.dim()) {
      throw DomainError("pq_convergence_report: chart dimension mismatch");
    }
    EvalOptions opts;
    opts.rule = seq.rules[i];
    opts.exec = exec;
    ConvergenceRow row;
    row.n = seq.index[i];
    row.forward = std::pow(elastic_energy(F, seq.base, seq.metrics[i], p, opts).energy, 1.0 / p);
    row.inverse = std::pow(elastic_energy(Finv, seq.metrics[i], seq.base, p, opts).energy, 1.0 / p);
    row.det = det_deviation_norm(F, seq.base, seq.metrics[i], q, opts);
    row.det_inverse = det_deviation_norm(Finv, seq.metrics[i], seq.base, q, opts);
    rep.rows.push_back(row);
  }
  std::vector<double> ns, fw, iv, dt, di;
  for (const auto& r : rep.rows) {
    ns.push_back(r.n);
    fw.push_back(r.forward);
    iv.push_back(r.inverse);
    dt.push_back(r.det);
    di.push_back(r.det_inverse);
  }
  rep.slope_forward = loglog_slope(ns, fw);
  rep.slope_inverse = loglog_slope(ns, iv);
  rep.slope_det = loglog_slope(ns, dt);
  rep.slope_det_inverse = loglog_slope(ns, di);
  return rep;
}

ConvergenceSequence striped_sequence(const std::vector<int>& ns, double epsilon, double sigma) {
  ConvergenceSequence seq{euclidean_metric(ChartGrid::unit(2, 2)), {}, {}, {}, {}, {}};
  for (int n : ns) {
    if (n < 2) throw DomainError("striped_sequence: n must be >= 2");
    // 2n cells of n sub-cells each put every raw stripe edge on a sub-cell edge
    const ChartGrid grid = ChartGrid::unit(2, 2 * n + 1);
    const double s = sigma < 0.0 ? 0.25 / (static_cast<double>(n) * n) : sigma;
    seq.index.push_back(n);
    seq.metrics.push_back(striped_metric(ChartGrid::unit(2, 2), n, epsilon, s));
    seq.maps.push_back(DiscreteMap::identity(grid));
    seq.inverse_maps.push_back(DiscreteMap::identity(grid));
    seq.rules.push_back(QuadratureRule{s == 0.0 ? 1 : 2, n});
  }
  return seq;
}

ConvergenceSequence euclidean_sequence(const std::vector<int>& ns, int cells) {
  ConvergenceSequence seq{euclidean_metric(ChartGrid::unit(2, 2)), {}, {}, {}, {}, {}};
  const ChartGrid grid = ChartGrid::unit(2, cells + 1);
  for (int n : ns) {
    seq.index.push_back(n);
    seq.metrics.push_back(euclidean_metric(ChartGrid::unit(2, 2)));
    seq.maps.push_back(DiscreteMap::identity(grid));
    seq.inverse_maps.push_back(DiscreteMap::identity(grid));
    seq.rules.push_back(QuadratureRule{});
  }
  return seq;
}

double graph_geodesic(const MetricField& field, const Vec& a, const Vec& b, int resolution) {
  if (field.dim() != 2) throw DomainError("graph_geodesic: 2-d charts only");
  if (resolution < 16) throw DomainError("graph_geodesic: resolution must be >= 16");
  if (!field.chart.contains(a) || !field.chart.contains(b)) {
    throw ChartError("graph_geodesic: endpoint outside the chart");
  }
  const ChartGrid grid = ChartGrid::box(field.chart.lower(), field.chart.upper(), resolution + 1);
  const int n0 = grid.nodes(0), n1 = grid.nodes(1);
  auto snap = [&](const Vec& x) {
    MultiIndex idx{0, 0, 0};
    for (int k = 0; k < 2; ++k) {
      const double t = (x(k) - grid.lower()(k)) / grid.spacing(k);
      idx[k] = std::clamp(static_cast<int>(std::lround(t)), 0, grid.nodes(k) - 1);
    }
    return grid.node_index(idx);
  };
  const std::size_t src = snap(a), dst = snap(b);
  if (src == dst) return 0.0;

  // Edge weights depend only on the edge, so both directions see identical values.
  auto weight = [&](std::size_t u, std::size_t v) {
    const Vec xu = grid.node_position(u), xv = grid.node_position(v);
    const Vec e = xv - xu;
    const double len = e.norm();
    const Vec dir = e / len;
    const Mat G = field.metric_fn(0.5 * (xu + xv));
    return len * std::sqrt(dir.dot(G * dir));
  };

  std::vector<double> dist(grid.node_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    if (u == dst) break;
    const int i = static_cast<int>(u % n0), j = static_cast<int>(u / n0);
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= n0 || jj >= n1) continue;
        const std::size_t v = static_cast<std::size_t>(jj) * n0 + ii;
        // canonical orientation of the edge keeps the weight symmetric bit for bit
        const double w = u < v ? weight(u, v) : weight(v, u);
        if (du + w < dist[v]) {
          dist[v] = du + w;
          heap.push({dist[v], v});
        }
      }
    }
  }
  return dist[dst];
}

BoundaryKind parse_boundary_kind(const std::string& name) {
  if (name == "identity") return BoundaryKind::identity;
  if (name == "rotated") return BoundaryKind::rotated;
  if (name == "reflected") return BoundaryKind::reflected;
  throw std::invalid_argument("unknown boundary kind '" + name + "'");
}

std::string to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::identity: return "identity";
    case BoundaryKind::rotated: return "rotated";
    case BoundaryKind::reflected: return "reflected";
  }
  return "?";
}

std::vector<double> smooth_perturbation(const ChartGrid& grid, double amplitude, std::uint64_t seed) {
  const int d = grid.dim();
  const TestSection field = make_test_section(grid, d, seed, 4).sampled_on(grid);
  std::vector<double> u = field.nodal_values();
  double sup = 0.0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += u[n * d + k] * u[n * d + k];
    sup = std::max(sup, std::sqrt(s));
  }
  if (sup > 0.0) {
    for (double& v : u) v *= amplitude / sup;
  }
  return u;
}

namespace {

// Best-fit proper rigid motion of the node cloud (Kabsch), returned as the
// max node distance to it.
double sup_to_best_rigid(const DiscreteMap& f) {
  const ChartGrid& grid = f.source();
  const int d = f.dim();
  const auto n = static_cast<double>(grid.node_count());
  Vec cx = Vec::Zero(d), cy = Vec::Zero(d);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    cx += grid.node_position(i) / n;
    cy += f.value(i) / n;
  }
  Mat C = Mat::Zero(d, d);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    C += (f.value(i) - cy) * (grid.node_position(i) - cx).transpose();
  }
  const NearestRotation nr = nearest_rotation(C);
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const Vec r = nr.rotation * (grid.node_position(i) - cx) + cy;
    sup = std::max(sup, (f.value(i) - r).norm());
  }
  return sup;
}

double max_pointwise_distortion(const DiscreteMap& f, const MetricField& g, const MetricField& h,
                                const EvalOptions& opts) {
  const CellQuadrature quad(f.dim(), opts.rule);
  const auto per_cell = map_indices<double>(f.source().cell_count(), opts.exec, [&](std::size_t c) {
    double m = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      m = std::max(m, pointwise_distortion(make_jet(f, g, h, c, quad, q, opts.policy)));
    }
    return m;
  });
  return per_cell.empty() ? 0.0 : *std::max_element(per_cell.begin(), per_cell.end());
}

}  // namespace

FlatRunReport rigidity_flat_run(const FlatRunConfig& cfg) {
  if (cfg.dim != 2 && cfg.dim != 3) throw DomainError("rigidity_flat_run: dim must be 2 or 3");
  if (cfg.cells < 2) throw DomainError("rigidity_flat_run: need at least 2 cells per axis");
  const int d = cfg.dim;
  const ChartGrid grid = ChartGrid::unit(d, cfg.cells + 1);
  const MetricField g = euclidean_metric(grid);
  const MetricField h = euclidean_metric(ChartGrid::box(Vec::Constant(d, -2.0), Vec::Constant(d, 3.0), 2));

  nlohmann::json spec;
  switch (cfg.boundary) {
    case BoundaryKind::identity: spec = "identity"; break;
    case BoundaryKind::rotated: spec = {{"name", "rotation"}, {"angle", cfg.angle}}; break;
    case BoundaryKind::reflected: spec = "reflection"; break;
  }
  const auto target = analytic_map(spec, d);
  DiscreteMap f0 = DiscreteMap::sample(grid, target, BoundaryMask::boundary);
  const auto u = smooth_perturbation(grid, cfg.amplitude, cfg.seed);
  auto vals = f0.values();
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += u[i];

  FlatRunReport rep{.trace = {}, .final_map = f0};
  rep.area = grid.box_volume();
  MinimizeResult res = minimize(f0, g, h, cfg.p, cfg.optimizer);
  rep.initial_energy = res.trace.rows.front().energy;
  rep.final_energy = res.trace.final_energy();
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    rep.sup_to_target = std::max(rep.sup_to_target, (res.map.value(n) - target(grid.node_position(n))).norm());
  }
  rep.sup_to_rigid = sup_to_best_rigid(res.map);
  rep.max_distortion = max_pointwise_distortion(res.map, g, h, cfg.optimizer.eval);
  rep.trace = std::move(res.trace);
  rep.final_map = std::move(res.map);
  return rep;
}

namespace {

ChartGrid cap_grid(double side, int cells) {
  return ChartGrid::box(Vec::Constant(2, -0.5 * side), Vec::Constant(2, 0.5 * side), cells + 1);
}

double linear_energy(double c, const ChartGrid& grid, const MetricField& g, const MetricField& h, double p,
                     const EvalOptions& opts) {
  const DiscreteMap f = DiscreteMap::sample(grid, [c](const Vec& x) { return Vec(c * x); });
  return elastic_energy(f, g, h, p, opts).energy;
}

// Golden-section search for the scale c minimizing the energy of x -> c x.
double best_fit_scale(const SphereRunConfig& cfg, double side) {
  const ChartGrid grid = cap_grid(side, cfg.fit_cells);
  const MetricField g = sphere_conformal_metric(grid, cfg.radius);
  const MetricField h = euclidean_metric(
      ChartGrid::box(Vec::Constant(2, -cfg.target_half_width), Vec::Constant(2, cfg.target_half_width), 2));
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.1, hi = 0.9 * cfg.target_half_width / (0.5 * side * std::sqrt(2.0));
  hi = std::min(hi, 10.0 / cfg.radius);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = linear_energy(x1, grid, g, h, cfg.p, cfg.optimizer.eval);
  double f2 = linear_energy(x2, grid, g, h, cfg.p, cfg.optimizer.eval);
  for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = linear_energy(x1, grid, g, h, cfg.p, cfg.optimizer.eval);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = linear_energy(x2, grid, g, h, cfg.p, cfg.optimizer.eval);
    }
  }
  return 0.5 * (lo + hi);
}

SphereRunRow sphere_minimize(const SphereRunConfig& cfg, double side, int cells, double scale) {
  const ChartGrid grid = cap_grid(side, cells);
  const MetricField g = sphere_conformal_metric(grid, cfg.radius);
  const MetricField h = euclidean_metric(
      ChartGrid::box(Vec::Constant(2, -cfg.target_half_width), Vec::Constant(2, cfg.target_half_width), 2));
  const DiscreteMap f0 = DiscreteMap::sample(grid, [scale](const Vec& x) { return Vec(scale * x); });
  const MinimizeResult res = minimize(f0, g, h, cfg.p, cfg.optimizer);
  return {cells, res.trace.rows.front().energy, res.trace.final_energy(), res.trace.iterations, res.trace.reason};
}

}  // namespace

SphereRunReport rigidity_sphere_run(const SphereRunConfig& cfg) {
  if (cfg.resolutions.empty()) throw DomainError("rigidity_sphere_run: no resolutions");
  if (!(cfg.cap_side > 0.0) || !(cfg.radius > 0.0)) throw DomainError("rigidity_sphere_run: bad cap geometry");
  SphereRunReport rep;
  rep.boundary_scale = best_fit_scale(cfg, cfg.cap_side);
  for (int cells : cfg.resolutions) rep.rows.push_back(sphere_minimize(cfg, cfg.cap_side, cells, rep.boundary_scale));
  rep.ratio = rep.rows.back().final_energy / rep.rows.front().final_energy;
  for (double side : cfg.sweep_sides) {
    const double scale = best_fit_scale(cfg, side);
    rep.sweep.emplace_back(side, sphere_minimize(cfg, side, cfg.sweep_cells, scale).final_energy);
  }
  rep.sweep_monotone = true;
  for (std::size_t i = 1; i < rep.sweep.size(); ++i) {
    const bool smaller = rep.sweep[i].first < rep.sweep[i - 1].first;
    const bool lower = rep.sweep[i].second < rep.sweep[i - 1].second;
    if (smaller != lower) rep.sweep_monotone = false;
  }
  return rep;
}

}  // namespace rigidlab
