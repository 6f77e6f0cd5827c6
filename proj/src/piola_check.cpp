#include "rigidlab/piola_check.hpp"

#include "rigidlab/cell_integration.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace rigidlab {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TestSection::TestSection(Vec lower, Vec upper, int components, std::vector<SectionMode> modes)
    : lower_(std::move(lower)), upper_(std::move(upper)), components_(components), modes_(std::move(modes)) {
  if (lower_.size() != upper_.size() || lower_.size() < 1 || lower_.size() > kMaxChartDim) {
    throw DomainError("TestSection: bad box");
  }
  if (components_ < 1) throw DomainError("TestSection: needs at least one component");
  for (const auto& m : modes_) {
    if (m.coef.size() != components_) throw DomainError("TestSection: mode coefficient size mismatch");
  }
}

Vec TestSection::value(const Vec& x) const {
  const int d = dim();
  double env = 1.0;
  std::array<double, kMaxChartDim> t{};
  for (int k = 0; k < d; ++k) {
    t[k] = (x(k) - lower_(k)) / (upper_(k) - lower_(k));
    env *= 4.0 * t[k] * (1.0 - t[k]);
  }
  Vec v = Vec::Zero(components_);
  for (const auto& m : modes_) {
    double s = env;
    for (int k = 0; k < d; ++k) s *= std::sin(m.k[k] * kPi * t[k]);
    v += s * m.coef;
  }
  return v;
}

Mat TestSection::gradient(const Vec& x) const {
  const int d = dim();
  std::array<double, kMaxChartDim> t{}, e{}, de{};
  for (int k = 0; k < d; ++k) {
    const double len = upper_(k) - lower_(k);
    t[k] = (x(k) - lower_(k)) / len;
    e[k] = 4.0 * t[k] * (1.0 - t[k]);
    de[k] = 4.0 * (1.0 - 2.0 * t[k]) / len;
  }
  Mat grad = Mat::Zero(components_, d);
  for (const auto& m : modes_) {
    std::array<double, kMaxChartDim> f{}, df{};
    for (int k = 0; k < d; ++k) {
      const double len = upper_(k) - lower_(k);
      const double s = std::sin(m.k[k] * kPi * t[k]);
      const double c = std::cos(m.k[k] * kPi * t[k]) * m.k[k] * kPi / len;
      f[k] = e[k] * s;
      df[k] = de[k] * s + e[k] * c;
    }
    for (int j = 0; j < d; ++j) {
      double p = df[j];
      for (int k = 0; k < d; ++k) {
        if (k != j) p *= f[k];
      }
      grad.col(j) += p * m.coef;
    }
  }
  return grad;
}

void TestSection::evaluate(const ChartGrid& grid, std::size_t cell, const CellQuadrature& quad, int q,
                           const Vec& x, Vec& value_out, Mat& gradient_out) const {
  if (!grid_) {
    value_out = value(x);
    gradient_out = gradient(x);
    return;
  }
  if (!(*grid_ == grid)) throw DomainError("TestSection: sampled on a different grid");
  const int d = dim();
  value_out = Vec::Zero(components_);
  gradient_out = Mat::Zero(components_, d);
  for (int a = 0; a < quad.corners(); ++a) {
    const std::size_t node = grid.cell_corner(cell, a);
    const double n = quad.shape(q, a);
    for (int b = 0; b < components_; ++b) {
      const double v = nodal_[node * components_ + b];
      value_out(b) += n * v;
      for (int j = 0; j < d; ++j) gradient_out(b, j) += v * quad.shape_grad(q, a, j) / grid.spacing(j);
    }
  }
}

TestSection TestSection::sampled_on(const ChartGrid& grid) const {
  if (grid.dim() != dim()) throw DomainError("TestSection: grid dimension mismatch");
  TestSection out = *this;
  out.grid_ = grid;
  out.nodal_.assign(grid.node_count() * components_, 0.0);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (grid.is_boundary_node(n)) continue;
    const Vec v = value(grid.node_position(n));
    for (int b = 0; b < components_; ++b) out.nodal_[n * components_ + b] = v(b);
  }
  return out;
}

TestSection combine(double a, const TestSection& s, double b, const TestSection& t) {
  if (s.components_ != t.components_ || s.lower_ != t.lower_ || s.upper_ != t.upper_ ||
      s.nodal() != t.nodal()) {
    throw DomainError("combine: incompatible test sections");
  }
  std::vector<SectionMode> modes;
  for (auto m : s.modes_) {
    m.coef *= a;
    modes.push_back(std::move(m));
  }
  for (auto m : t.modes_) {
    m.coef *= b;
    modes.push_back(std::move(m));
  }
  TestSection out(s.lower_, s.upper_, s.components_, std::move(modes));
  if (s.nodal()) {
    if (!(*s.grid_ == *t.grid_)) throw DomainError("combine: sections sampled on different grids");
    out.grid_ = s.grid_;
    out.nodal_.resize(s.nodal_.size());
    for (std::size_t i = 0; i < s.nodal_.size(); ++i) out.nodal_[i] = a * s.nodal_[i] + b * t.nodal_[i];
  }
  return out;
}

TestSection make_test_section(const ChartGrid& box, int components, std::uint64_t seed, int mode_count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> wave(1, 3);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<SectionMode> modes(mode_count);
  for (auto& m : modes) {
    for (int k = 0; k < box.dim(); ++k) m.k[k] = wave(rng);
    m.coef.resize(components);
    for (int b = 0; b < components; ++b) m.coef(b) = coef(rng);
  }
  return TestSection(box.lower(), box.upper(), components, std::move(modes));
}

Embedding sphere_embedding(double radius, const ChartGrid& chart) {
  if (chart.dim() != 2) throw DomainError("sphere_embedding: chart must be 2-dimensional");
  if (!(radius > 0.0)) throw DomainError("sphere_embedding: radius must be positive");
  const double R = radius, R2 = radius * radius;
  Embedding e{.label = "sphere",
              .ambient = 3,
              .iota = {},
              .diota = {},
              .second_fundamental = {},
              .induced = sphere_conformal_metric(chart, radius)};
  e.iota = [R, R2](const Vec& x) {
    const double r2 = x.squaredNorm(), den = R2 + r2;
    Vec p(3);
    p << 2.0 * R2 * x(0) / den, 2.0 * R2 * x(1) / den, R * (r2 - R2) / den;
    return p;
  };
  e.diota = [R, R2](const Vec& x) {
    const double r2 = x.squaredNorm(), den = R2 + r2;
    Mat J(3, 2);
    for (int k = 0; k < 2; ++k) {
      for (int j = 0; j < 2; ++j) {
        J(k, j) = 2.0 * R2 * ((k == j ? 1.0 : 0.0) / den - 2.0 * x(k) * x(j) / (den * den));
      }
    }
    for (int j = 0; j < 2; ++j) J(2, j) = 4.0 * R * R2 * x(j) / (den * den);
    return J;
  };
  const auto iota = e.iota;
  e.second_fundamental = [iota, R2](const Vec& u, const Vec& v, const Vec& x) {
    const double s = sphere_conformal_factor(x, std::sqrt(R2));
    return Vec((s * u.dot(v) / R2) * iota(x));
  };
  return e;
}

Embedding plane_embedding(const ChartGrid& chart) {
  const int d = chart.dim();
  Embedding e{.label = "plane",
              .ambient = d + 1,
              .iota = {},
              .diota = {},
              .second_fundamental = {},
              .induced = euclidean_metric(chart)};
  e.iota = [d](const Vec& x) {
    Vec p = Vec::Zero(d + 1);
    p.head(d) = x;
    return p;
  };
  e.diota = [d](const Vec&) {
    Mat J = Mat::Zero(d + 1, d);
    J.topRows(d).setIdentity();
    return J;
  };
  e.second_fundamental = [d](const Vec&, const Vec&, const Vec&) { return Vec(Vec::Zero(d + 1)); };
  return e;
}

double strong_piola_residual(const DiscreteMap& f, const TestSection& xi, const MetricField& g,
                             const MetricField& h, const EvalOptions& opts) {
  const int d = f.dim();
  if (xi.components() != d || xi.dim() != d) throw DomainError("strong_piola_residual: section shape mismatch");
  const CellQuadrature quad(d, opts.rule);
  const ChartGrid& grid = f.source();
  return integrate_cells(f, g, h, opts, [&](const QuadPointJet& jet, std::size_t cell, int q) {
           Vec v;
           Mat V;
           xi.evaluate(grid, cell, quad, q, jet.x, v, V);
           if (!h.constant) {
             const Christoffel gam = christoffel_at(h, jet.y);
             for (int b = 0; b < d; ++b) {
               for (int j = 0; j < d; ++j) {
                 double s = 0.0;
                 for (int c = 0; c < d; ++c) {
                   for (int e = 0; e < d; ++e) s += jet.Df(c, j) * gam(b, c, e) * v(e);
                 }
                 V(b, j) += s;
               }
             }
           }
           return pairing(intrinsic_cof(jet.Df, jet.G, jet.Hf), V, jet.G, jet.Hf);
         }).total;
}

WeakPiolaSides weak_piola_residual(const DiscreteMap& f, const TestSection& xi, const MetricField& g,
                                   const Embedding& emb, bool use_cof, const EvalOptions& opts) {
  const int d = f.dim();
  if (xi.components() != emb.ambient || xi.dim() != d) {
    throw DomainError("weak_piola_residual: section must have one component per ambient axis");
  }
  const CellQuadrature quad(d, opts.rule);
  const ChartGrid& grid = f.source();
  auto cof = [&](const QuadPointJet& jet) -> Mat {
    return use_cof ? intrinsic_cof(jet.Df, jet.G, jet.Hf) : Mat(jet.Df);
  };
  WeakPiolaSides out;
  out.lhs = integrate_cells(f, g, emb.induced, opts, [&](const QuadPointJet& jet, std::size_t cell, int q) {
              Vec v;
              Mat V;
              xi.evaluate(grid, cell, quad, q, jet.x, v, V);
              const Mat P = emb.diota(jet.y) * cof(jet);
              return (P.transpose() * V).cwiseProduct(jet.G.inverse()).sum();
            }).total;
  out.rhs = integrate_cells(f, g, emb.induced, opts, [&](const QuadPointJet& jet, std::size_t cell, int q) {
              Vec v;
              Mat V;
              xi.evaluate(grid, cell, quad, q, jet.x, v, V);
              const Mat C = cof(jet);
              const Mat Gi = jet.G.inverse();
              double s = 0.0;
              for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                  s += Gi(i, j) * emb.second_fundamental(C.col(i), jet.Df.col(j), jet.y).dot(v);
                }
              }
              return s;
            }).total;
  return out;
}

double refinement_order(const std::vector<double>& h, const std::vector<double>& residual) {
  if (h.size() != residual.size() || h.size() < 2) throw DomainError("refinement_order: need >= 2 levels");
  const auto n = static_cast<double>(h.size());
  double mx = 0, my = 0;
  std::vector<double> lx(h.size()), ly(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    lx[i] = std::log(h[i]);
    ly[i] = std::log(std::max(std::abs(residual[i]), 1e-300));
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

PiolaCase parse_piola_case(const std::string& name) {
  if (name == "flat_affine") return PiolaCase::flat_affine;
  if (name == "flat_smooth") return PiolaCase::flat_smooth;
  if (name == "sphere_target") return PiolaCase::sphere_target;
  if (name == "weak_cofactor") return PiolaCase::weak_cofactor;
  if (name == "weak_isometry") return PiolaCase::weak_isometry;
  throw std::invalid_argument("unknown piola case '" + name + "'");
}

std::string to_string(PiolaCase c) {
  switch (c) {
    case PiolaCase::flat_affine: return "flat_affine";
    case PiolaCase::flat_smooth: return "flat_smooth";
    case PiolaCase::sphere_target: return "sphere_target";
    case PiolaCase::weak_cofactor: return "weak_cofactor";
    case PiolaCase::weak_isometry: return "weak_isometry";
  }
  return "?";
}

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ChartGrid square(double lo, double hi, int cells) { return ChartGrid::box(vec2(lo, lo), vec2(hi, hi), cells + 1); }

// Smooth map of the unit square into the sphere chart around the south pole.
Vec into_sphere_chart(const Vec& x) {
  const double b = std::sin(kPi * x(0)) * std::sin(kPi * x(1));
  return vec2(0.8 * (x(0) - 0.5) + 0.1 * b, 0.8 * (x(1) - 0.5) + 0.05 * b + 0.1 * x(0) * x(0));
}

// Rotation of the unit sphere about the first ambient axis, in the stereographic chart.
Vec rotate_cap(const Vec& x, double angle) {
  const double r2 = x.squaredNorm(), den = 1.0 + r2;
  const double p0 = 2.0 * x(0) / den, p1 = 2.0 * x(1) / den, p2 = (r2 - 1.0) / den;
  const double c = std::cos(angle), s = std::sin(angle);
  const double q1 = c * p1 - s * p2, q2 = s * p1 + c * p2;
  return vec2(p0 / (1.0 - q2), q1 / (1.0 - q2));
}

double study_residual(PiolaCase which, int cells, std::uint64_t seed, Exec exec) {
  EvalOptions opts;
  opts.exec = exec;
  switch (which) {
    case PiolaCase::flat_affine: {
      const ChartGrid src = square(0.0, 1.0, cells);
      const MetricField g = euclidean_metric(src), h = euclidean_metric(square(-2.0, 3.0, 1));
      const DiscreteMap f = DiscreteMap::sample(src, [](const Vec& x) {
        return vec2(1.2 * x(0) + 0.3 * x(1) + 0.1, -0.1 * x(0) + 0.9 * x(1) - 0.2);
      });
      const TestSection xi = make_test_section(src, 2, seed).sampled_on(src);
      return strong_piola_residual(f, xi, g, h, opts);
    }
    case PiolaCase::flat_smooth: {
      const ChartGrid src = square(0.0, 1.0, cells);
      const MetricField g = euclidean_metric(src), h = euclidean_metric(square(-1.0, 2.0, 1));
      const DiscreteMap f = DiscreteMap::sample(src, [](const Vec& x) {
        return vec2(x(0) + 0.1 * std::sin(kPi * x(0)) * std::sin(kPi * x(1)), x(1));
      });
      return strong_piola_residual(f, make_test_section(src, 2, seed), g, h, opts);
    }
    case PiolaCase::sphere_target: {
      const ChartGrid src = square(0.0, 1.0, cells);
      const MetricField g = euclidean_metric(src);
      const MetricField h = sphere_conformal_metric(square(-2.0, 2.0, 8), 1.0);
      const DiscreteMap f = DiscreteMap::sample(src, into_sphere_chart);
      return strong_piola_residual(f, make_test_section(src, 2, seed), g, h, opts);
    }
    case PiolaCase::weak_cofactor: {
      const ChartGrid src = square(0.0, 1.0, cells);
      const MetricField g = euclidean_metric(src);
      const Embedding emb = sphere_embedding(1.0, square(-2.0, 2.0, 8));
      const DiscreteMap f = DiscreteMap::sample(src, into_sphere_chart);
      return weak_piola_residual(f, make_test_section(src, 3, seed), g, emb, true, opts).residual();
    }
    case PiolaCase::weak_isometry: {
      const ChartGrid src = square(-0.4, 0.4, cells);
      const MetricField g = sphere_conformal_metric(src, 1.0);
      const Embedding emb = sphere_embedding(1.0, square(-3.0, 3.0, 8));
      const DiscreteMap f = DiscreteMap::sample(src, [](const Vec& x) { return rotate_cap(x, 0.4); });
      return weak_piola_residual(f, make_test_section(src, 3, seed), g, emb, false, opts).residual();
    }
  }
  return 0.0;
}

}  // namespace

PiolaStudy run_piola_study(PiolaCase which, int coarse_cells, int levels, std::uint64_t seed, Exec exec) {
  if (coarse_cells < 1 || levels < 1) throw DomainError("run_piola_study: need cells >= 1 and levels >= 1");
  PiolaStudy study{which, {}, 0.0, 0.0};
  std::vector<double> hs, rs;
  for (int level = 0; level < levels; ++level) {
    const int cells = coarse_cells << level;
    ResidualRow row;
    row.level = level;
    row.cells = cells;
    row.h = 1.0 / cells;
    row.residual = study_residual(which, cells, seed, exec);
    hs.push_back(row.h);
    rs.push_back(row.residual);
    row.order = hs.size() >= 2 ? refinement_order(hs, rs) : 0.0;
    study.max_abs_residual = std::max(study.max_abs_residual, std::abs(row.residual));
    study.rows.push_back(row);
  }
  study.order = study.rows.back().order;
  return study;
}

}  // namespace rigidlab
