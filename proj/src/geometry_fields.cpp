#include "rigidlab/geometry_fields.hpp"

#include "rigidlab/kernels.hpp"
#include "rigidlab/quadrature.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rigidlab {

int thread_count() { return omp_get_max_threads(); }
void set_thread_count(int threads) { omp_set_num_threads(std::max(1, threads)); }

// ---- ChartGrid -----------------------------------------------------------------

ChartGrid::ChartGrid(const Vec& lower, const Vec& upper, std::vector<int> nodes)
    : dim_(static_cast<int>(lower.size())), lower_(lower), upper_(upper), nodes_(std::move(nodes)) {
  if (dim_ < 1 || dim_ > kMaxChartDim) throw DomainError("ChartGrid: dimension must be 1..3");
  if (upper_.size() != dim_ || static_cast<int>(nodes_.size()) != dim_) {
    throw DomainError("ChartGrid: lower, upper and nodes must have the same dimension");
  }
  spacing_.resize(dim_);
  node_count_ = 1;
  cell_count_ = 1;
  for (int k = 0; k < dim_; ++k) {
    if (!(upper_(k) > lower_(k))) throw DomainError("ChartGrid: upper must exceed lower");
    if (nodes_[k] < 2) throw DomainError("ChartGrid: at least 2 nodes per axis");
    spacing_(k) = (upper_(k) - lower_(k)) / (nodes_[k] - 1);
    node_count_ *= static_cast<std::size_t>(nodes_[k]);
    cell_count_ *= static_cast<std::size_t>(nodes_[k] - 1);
  }
}

ChartGrid ChartGrid::unit(int dim, int nodes) {
  return ChartGrid(Vec::Zero(dim), Vec::Ones(dim), std::vector<int>(dim, nodes));
}

ChartGrid ChartGrid::box(const Vec& lower, const Vec& upper, int nodes_per_axis) {
  return ChartGrid(lower, upper, std::vector<int>(lower.size(), nodes_per_axis));
}

double ChartGrid::cell_volume() const { return spacing_.prod(); }

double ChartGrid::box_volume() const { return (upper_ - lower_).prod(); }

MultiIndex ChartGrid::node_multi_index(std::size_t node) const {
  MultiIndex idx{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    idx[k] = static_cast<int>(node % nodes_[k]);
    node /= nodes_[k];
  }
  return idx;
}

std::size_t ChartGrid::node_index(const MultiIndex& idx) const {
  std::size_t node = 0;
  for (int k = dim_ - 1; k >= 0; --k) node = node * nodes_[k] + idx[k];
  return node;
}

MultiIndex ChartGrid::cell_multi_index(std::size_t cell) const {
  MultiIndex idx{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    idx[k] = static_cast<int>(cell % (nodes_[k] - 1));
    cell /= (nodes_[k] - 1);
  }
  return idx;
}

Vec ChartGrid::node_position(std::size_t node) const {
  const MultiIndex idx = node_multi_index(node);
  Vec x(dim_);
  for (int k = 0; k < dim_; ++k) {
    // exact at the upper end
    x(k) = idx[k] == nodes_[k] - 1 ? upper_(k) : lower_(k) + idx[k] * spacing_(k);
  }
  return x;
}

Vec ChartGrid::cell_origin(std::size_t cell) const {
  const MultiIndex idx = cell_multi_index(cell);
  Vec x(dim_);
  for (int k = 0; k < dim_; ++k) x(k) = lower_(k) + idx[k] * spacing_(k);
  return x;
}

Vec ChartGrid::cell_center(std::size_t cell) const { return cell_origin(cell) + 0.5 * spacing_; }

std::size_t ChartGrid::cell_corner(std::size_t cell, int corner) const {
  MultiIndex idx = cell_multi_index(cell);
  for (int k = 0; k < dim_; ++k) idx[k] += (corner >> k) & 1;
  return node_index(idx);
}

bool ChartGrid::is_boundary_node(std::size_t node) const {
  const MultiIndex idx = node_multi_index(node);
  for (int k = 0; k < dim_; ++k) {
    if (idx[k] == 0 || idx[k] == nodes_[k] - 1) return true;
  }
  return false;
}

bool ChartGrid::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  for (int k = 0; k < dim_; ++k) {
    const double slack = tol * (upper_(k) - lower_(k));
    if (!(x(k) >= lower_(k) - slack && x(k) <= upper_(k) + slack)) return false;
  }
  return true;
}

Vec ChartGrid::clamp(const Vec& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

ChartGrid ChartGrid::refined() const {
  std::vector<int> n(nodes_);
  for (int& v : n) v = 2 * (v - 1) + 1;
  return ChartGrid(lower_, upper_, std::move(n));
}

bool ChartGrid::operator==(const ChartGrid& other) const {
  return dim_ == other.dim_ && nodes_ == other.nodes_ && lower_ == other.lower_ &&
         upper_ == other.upper_;
}

// ---- metric queries ------------------------------------------------------------

MetricMatrix metric_at(const MetricField& field, const Vec& x) {
  if (!field.chart.contains(x)) {
    throw ChartError("metric_at: point outside the chart of '" + field.label + "'");
  }
  return MetricMatrix(field.metric_fn(x));
}

MetricMatrix metric_at_unchecked(const MetricField& field, const Vec& x) {
  return MetricMatrix::trusted(field.metric_fn(x));
}

Christoffel christoffel_from_gradient(const Mat& g, const MetricGradient& dg) {
  const int d = dg.dim;
  const Mat ginv = MetricMatrix::trusted(g).inverse();
  Christoffel out;
  out.dim = d;
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) {
          s += ginv(k, l) * (dg.partial[i](j, l) + dg.partial[j](i, l) - dg.partial[l](i, j));
        }
        out(k, i, j) = 0.5 * s;
        out(k, j, i) = 0.5 * s;
      }
    }
  }
  return out;
}

Christoffel christoffel_at(const MetricField& field, const Vec& x) {
  if (field.christoffel_fn) return field.christoffel_fn(x);
  const int d = field.dim();
  if (field.constant) {
    Christoffel zero;
    zero.dim = d;
    return zero;
  }
  MetricGradient dg;
  dg.dim = d;
  for (int k = 0; k < d; ++k) {
    const double step = 0.5 * field.chart.spacing(k);
    Vec xp = x, xm = x;
    xp(k) += step;
    xm(k) -= step;
    if (!field.chart.contains(xp) || !field.chart.contains(xm)) {
      throw ChartError("christoffel_at: finite-difference stencil leaves the chart of '" +
                       field.label + "'");
    }
    dg.partial[k] = (field.metric_fn(xp) - field.metric_fn(xm)) / (2.0 * step);
  }
  return christoffel_from_gradient(field.metric_fn(x), dg);
}

MetricGradient metric_gradient_at(const MetricField& field, const Vec& x) {
  const int d = field.dim();
  if (field.gradient_fn) return field.gradient_fn(x);
  MetricGradient dg;
  dg.dim = d;
  if (field.constant) {
    for (int k = 0; k < d; ++k) dg.partial[k] = Mat::Zero(d, d);
    return dg;
  }
  for (int k = 0; k < d; ++k) {
    const double step = 1e-6 * (field.chart.upper()(k) - field.chart.lower()(k));
    Vec xp = x, xm = x;
    xp(k) = std::min(x(k) + step, field.chart.upper()(k));
    xm(k) = std::max(x(k) - step, field.chart.lower()(k));
    dg.partial[k] = (field.metric_fn(xp) - field.metric_fn(xm)) / (xp(k) - xm(k));
  }
  return dg;
}

double total_volume(const MetricField& field, int quad_order) {
  const ChartGrid& chart = field.chart;
  const CellQuadrature quad(chart.dim(), QuadratureRule{quad_order, 1});
  const double cell_vol = chart.cell_volume();
  const auto per_cell = map_indices<double>(chart.cell_count(), Exec::parallel, [&](std::size_t c) {
    const Vec origin = chart.cell_origin(c);
    double sum = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const Vec x = origin + quad.point(q).cwiseProduct(chart.spacing_vector());
      sum += quad.weight(q) * std::sqrt(metric_at_unchecked(field, x).det());
    }
    return sum * cell_vol;
  });
  return ordered_sum(per_cell);
}

// ---- built-ins -----------------------------------------------------------------

namespace {

struct ConformalSample {
  double factor;
  Vec gradient;
};

// g = s I; Gamma^k_ij = d_ik d_j phi + d_jk d_i phi - d_ij d_k phi with phi = log(s) / 2.
MetricField conformal_field(const ChartGrid& chart, std::function<ConformalSample(const Vec&)> sample,
                            std::string label) {
  const int d = chart.dim();
  MetricField f{chart, {}, {}, {}, std::move(label), false};
  f.metric_fn = [sample, d](const Vec& x) -> Mat { return sample(x).factor * Mat::Identity(d, d); };
  f.gradient_fn = [sample, d](const Vec& x) {
    const ConformalSample s = sample(x);
    MetricGradient dg;
    dg.dim = d;
    for (int k = 0; k < d; ++k) dg.partial[k] = s.gradient(k) * Mat::Identity(d, d);
    return dg;
  };
  f.christoffel_fn = [sample, d](const Vec& x) {
    const ConformalSample s = sample(x);
    const Vec dphi = s.gradient / (2.0 * s.factor);
    Christoffel G;
    G.dim = d;
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          G(k, i, j) = (i == k ? dphi(j) : 0.0) + (j == k ? dphi(i) : 0.0) - (i == j ? dphi(k) : 0.0);
        }
      }
    }
    return G;
  };
  return f;
}

MetricField flat_field(const ChartGrid& chart, std::string label) {
  const int d = chart.dim();
  MetricField f{chart, {}, {}, {}, std::move(label), true};
  f.metric_fn = [d](const Vec&) -> Mat { return Mat::Identity(d, d); };
  return f;
}

// C^2 smootherstep CDF on [-1, 1] and its density.
double smooth_cdf(double u) {
  const double t = std::clamp(0.5 * (u + 1.0), 0.0, 1.0);
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double smooth_density(double u) {
  const double t = 0.5 * (u + 1.0);
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 15.0 * t * t * (1.0 - t) * (1.0 - t);
}

double stripe_offset(double t, int n) { return t - std::round(t * n) / n; }

double stripe_indicator_derivative(double t, int n, double sigma) {
  if (sigma <= 0.0) return 0.0;
  const double half = 0.5 / (static_cast<double>(n) * n);
  const double delta = stripe_offset(t, n);
  return (smooth_density((delta + half) / sigma) - smooth_density((delta - half) / sigma)) / sigma;
}

void assert_spd_on_gauss_points(const MetricField& field) {
  const ChartGrid& chart = field.chart;
  const CellQuadrature quad(chart.dim(), QuadratureRule{2, 1});
  for_each_index(chart.cell_count(), Exec::parallel, [&](std::size_t c) {
    const Vec origin = chart.cell_origin(c);
    for (int q = 0; q < quad.size(); ++q) {
      const Vec x = origin + quad.point(q).cwiseProduct(chart.spacing_vector());
      MetricMatrix check(field.metric_fn(x));
      (void)check;
    }
  });
}

}  // namespace

double sphere_conformal_factor(const Vec& x, double radius) {
  const double r2 = radius * radius;
  const double den = r2 + x.squaredNorm();
  return 4.0 * r2 * r2 / (den * den);
}

double stripe_indicator_1d(double t, int n, double sigma) {
  const double half = 0.5 / (static_cast<double>(n) * n);
  const double delta = stripe_offset(t, n);
  if (sigma <= 0.0) return std::abs(delta) < half ? 1.0 : 0.0;
  return smooth_cdf((delta + half) / sigma) - smooth_cdf((delta - half) / sigma);
}

int striped_aligned_nodes(int n) { return 2 * n * n + 1; }

MetricField euclidean_metric(const ChartGrid& chart) { return flat_field(chart, "euclidean"); }

MetricField sphere_conformal_metric(const ChartGrid& chart, double radius) {
  if (!(radius > 0.0)) throw DomainError("sphere_conformal: radius must be positive");
  return conformal_field(
      chart,
      [radius](const Vec& x) {
        const double r2 = radius * radius;
        const double den = r2 + x.squaredNorm();
        const double s = 4.0 * r2 * r2 / (den * den);
        return ConformalSample{s, (-4.0 * s / den) * x};
      },
      "sphere_conformal(R=" + std::to_string(radius) + ")");
}

MetricField striped_metric(const ChartGrid& chart, int n, double epsilon, double sigma) {
  if (n < 1) throw DomainError("striped: n must be >= 1");
  if (!(epsilon > 0.0)) throw DomainError("striped: epsilon must be positive");
  const double width = 1.0 / (static_cast<double>(n) * n);
  if (sigma < 0.0 || 0.5 * width + sigma >= 0.5 / n) {
    throw DomainError("striped: sigma must be >= 0 and keep neighbouring stripes apart");
  }
  const int d = chart.dim();
  auto sample = [n, epsilon, sigma, d](const Vec& x) {
    double outside = 1.0;  // prod_k (1 - I_k)
    std::array<double, kMaxChartDim> ind{};
    for (int k = 0; k < d; ++k) {
      ind[k] = stripe_indicator_1d(x(k), n, sigma);
      outside *= 1.0 - ind[k];
    }
    ConformalSample s{1.0 - (1.0 - epsilon) * (1.0 - outside), Vec::Zero(d)};
    if (sigma > 0.0) {
      for (int k = 0; k < d; ++k) {
        double others = 1.0;
        for (int m = 0; m < d; ++m) {
          if (m != k) others *= 1.0 - ind[m];
        }
        s.gradient(k) = -(1.0 - epsilon) * stripe_indicator_derivative(x(k), n, sigma) * others;
      }
    }
    return s;
  };
  std::string label = "striped(n=" + std::to_string(n) + ",eps=" + std::to_string(epsilon) +
                      ",sigma=" + std::to_string(sigma) + ")";
  if (sigma > 0.0) return conformal_field(chart, sample, std::move(label));
  // the raw indicator is never differentiated
  MetricField f{chart, {}, {}, {}, std::move(label), false};
  f.metric_fn = [sample, d](const Vec& x) -> Mat { return sample(x).factor * Mat::Identity(d, d); };
  return f;
}

MetricTag parse_metric_tag(const std::string& name) {
  if (name == "euclidean") return MetricTag::euclidean;
  if (name == "sphere_conformal") return MetricTag::sphere_conformal;
  if (name == "striped") return MetricTag::striped;
  if (name == "flat_torus_cell") return MetricTag::flat_torus_cell;
  throw std::invalid_argument("unknown metric tag '" + name + "'");
}

std::string to_string(MetricTag tag) {
  switch (tag) {
    case MetricTag::euclidean: return "euclidean";
    case MetricTag::sphere_conformal: return "sphere_conformal";
    case MetricTag::striped: return "striped";
    case MetricTag::flat_torus_cell: return "flat_torus_cell";
  }
  return "unknown";
}

MetricField make_metric(const BuiltinMetric& spec, const ChartGrid& chart) {
  MetricField field = [&] {
    switch (spec.tag) {
      case MetricTag::euclidean: return euclidean_metric(chart);
      case MetricTag::sphere_conformal: return sphere_conformal_metric(chart, spec.radius);
      case MetricTag::striped: {
        const double width = 1.0 / (static_cast<double>(spec.stripes) * spec.stripes);
        return striped_metric(chart, spec.stripes, spec.epsilon, spec.sigma.value_or(0.25 * width));
      }
      case MetricTag::flat_torus_cell: return flat_field(chart, "flat_torus_cell");
    }
    throw DomainError("make_metric: unhandled tag");
  }();
  assert_spd_on_gauss_points(field);
  return field;
}

MetricField without_closed_forms(MetricField field) {
  field.christoffel_fn = nullptr;
  field.gradient_fn = nullptr;
  field.constant = false;
  return field;
}

}  // namespace rigidlab
