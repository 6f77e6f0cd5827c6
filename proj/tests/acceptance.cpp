// Acceptance runner. `rigidlab_acceptance [N ...]` runs the listed criteria
// (all of 1..12 when none are given) and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria, capped at 1.

#include "rigidlab/algebra_suite.hpp"
#include "rigidlab/experiments.hpp"
#include "rigidlab/functionals.hpp"
#include "rigidlab/piola_check.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

using namespace rigidlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<double> numbers;  // every value that enters a verdict, for the determinism rerun

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
  void keep(double v) { numbers.push_back(v); }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const PropertyResult& property(const AlgebraSuiteReport& r, const std::string& name) {
  for (const auto& p : r.properties) {
    if (p.name == name) return p;
  }
  std::fprintf(stderr, "missing property %s\n", name.c_str());
  std::abort();
}

std::vector<AlgebraSuiteReport> suites() {
  std::vector<AlgebraSuiteReport> out;
  for (int d : {2, 3}) {
    AlgebraSuiteConfig cfg;
    cfg.dim = d;
    out.push_back(run_algebra_suite(cfg));
  }
  return out;
}

void add_property(Outcome& o, const AlgebraSuiteReport& r, const std::string& name) {
  const PropertyResult& p = property(r, name);
  o.keep(p.worst);
  o.keep(static_cast<double>(p.failures));
  o.check(p.passed() && p.cases > 0, "d=" + std::to_string(r.dim) + " " + name + " " + std::to_string(p.failures) +
                                         "/" + std::to_string(p.cases) + " failures, worst " + fmt("%.3g", p.worst));
}

Outcome criterion_1() {
  Outcome o;
  for (const auto& r : suites()) {
    for (const char* name : {"transpose_cof_equals_det", "cof_transpose_equals_det", "so_fixed_point", "so_converse"}) {
      add_property(o, r, name);
    }
    o.check(property(r, "transpose_cof_equals_det").cases == 10000, "10^4 cases");
  }
  return o;
}

Outcome criterion_2() {
  Outcome o;
  for (int d : {2, 3}) {
    AlgebraSuiteConfig cfg;
    cfg.dim = d;
    cfg.cases = 0;
    add_property(o, run_algebra_suite(cfg), "det_derivative");
  }
  return o;
}

Outcome criterion_3() {
  Outcome o;
  for (int d : {2, 3}) {
    AlgebraSuiteConfig cfg;
    cfg.dim = d;
    cfg.fd_cases = 0;
    add_property(o, run_algebra_suite(cfg), "volume_bound");
  }
  // discrete analogue on smooth orientation-preserving maps
  AlgebraSampler s(2, 7);
  const ChartGrid grid = ChartGrid::unit(2, 33);
  const MetricField h = euclidean_metric(ChartGrid::box(Vec::Constant(2, -6.0), Vec::Constant(2, 6.0), 2));
  double worst = -1e300;
  int bad = 0;
  for (int k = 0; k < 20; ++k) {
    const Mat A = s.positive_basis_change();
    const MetricField g = k % 2 ? sphere_conformal_metric(grid, 1.0) : euclidean_metric(grid);
    DiscreteMap f = DiscreteMap::sample(grid, [&](const Vec& x) { return Vec(A * x); });
    const auto u = smooth_perturbation(grid, 0.01, 100 + k);
    auto vals = f.values();
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += u[i];
    const VolumeBoundSides vb = discrete_volume_bound(f, g, h);
    worst = std::max(worst, vb.lhs - vb.rhs);
    bad += vb.lhs > vb.rhs + 1e-4;
    o.keep(vb.lhs);
    o.keep(vb.rhs);
  }
  o.check(bad == 0, fmt("discrete bound on 20 maps, max(lhs - rhs) = %.3g", worst));
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const PiolaStudy affine = run_piola_study(PiolaCase::flat_affine, 64, 4, 42);
  o.keep(affine.max_abs_residual);
  o.check(affine.max_abs_residual <= 1e-12, fmt("affine max |r| = %.3g", affine.max_abs_residual));
  const PiolaStudy smooth = run_piola_study(PiolaCase::flat_smooth, 64, 4, 42);
  o.keep(smooth.order);
  o.check(smooth.order >= 1.9, fmt("smooth flat order %.3f over 64..512", smooth.order));
  const PiolaStudy sphere = run_piola_study(PiolaCase::sphere_target, 64, 4, 42);
  o.keep(sphere.order);
  o.check(sphere.order >= 1.5, fmt("sphere target order %.3f", sphere.order));
  for (const auto* st : {&affine, &smooth, &sphere}) {
    for (const auto& r : st->rows) o.keep(r.residual);
  }
  return o;
}

Outcome criterion_5() {
  Outcome o;
  for (PiolaCase c : {PiolaCase::weak_cofactor, PiolaCase::weak_isometry}) {
    const PiolaStudy st = run_piola_study(c, 64, 3, 42);
    for (const auto& r : st.rows) o.keep(r.residual);
    o.keep(st.order);
    o.check(st.order >= 1.5, to_string(c) + fmt(" order %.3f", st.order));
  }
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const ChartGrid grid = ChartGrid::unit(2, 129);
  const MetricField g = euclidean_metric(grid);
  struct Target {
    const char* name;
    MetricField h;
    std::function<Vec(const Vec&)> base;
  };
  const ChartGrid flat_chart = ChartGrid::box(Vec::Constant(2, -2.0), Vec::Constant(2, 3.0), 2);
  const ChartGrid sphere_chart = ChartGrid::box(Vec::Constant(2, -2.0), Vec::Constant(2, 2.0), 9);
  std::vector<Target> targets;
  targets.push_back({"flat", euclidean_metric(flat_chart), analytic_map(nlohmann::json{{"name", "bump"}}, 2)});
  targets.push_back({"sphere", sphere_conformal_metric(sphere_chart, 1.0), [](const Vec& x) {
                       Vec y = 1.2 * x;
                       y(0) += 0.1 * std::sin(M_PI * x(1));
                       return Vec(y - Vec::Constant(2, 0.5));
                     }});
  for (const auto& t : targets) {
    const DiscreteMap f0 = DiscreteMap::sample(grid, t.base);
    const double j0 = jacobian_functional(f0, g, t.h);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      DiscreteMap f = f0;
      const auto u = smooth_perturbation(grid, 0.05, 1000 + k);
      auto vals = f.values();
      for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += u[i];
      const double j = jacobian_functional(f, g, t.h);
      o.keep(j);
      worst = std::max(worst, std::abs(j - j0));
    }
    o.check(worst <= 1e-6, std::string(t.name) + fmt(" max |dJ| = %.3g (J = %.6f)", worst, j0));
  }
  return o;
}

Outcome criterion_7() {
  Outcome o;
  int good = 0;
  double worst_e = 0.0, worst_sup = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    FlatRunConfig cfg;
    cfg.seed = seed;
    const FlatRunReport r = rigidity_flat_run(cfg);
    o.keep(r.final_energy);
    o.keep(r.sup_to_target);
    worst_e = std::max(worst_e, r.final_energy);
    worst_sup = std::max(worst_sup, r.sup_to_target);
    good += r.final_energy < 1e-10 && r.sup_to_target < 1e-5;
  }
  o.check(good == 10, fmt("%.0f/10 seeds, max energy %.3g, max sup %.3g", good, worst_e, worst_sup));
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const SphereRunReport r = rigidity_sphere_run(SphereRunConfig{});
  bool positive = r.rows.size() >= 3;
  std::string energies;
  for (const auto& row : r.rows) {
    positive = positive && row.final_energy > 0.0;
    o.keep(row.final_energy);
    energies += (energies.empty() ? "" : ", ") + fmt("%.4g", row.final_energy);
  }
  o.keep(r.ratio);
  o.check(positive, "energies " + energies);
  o.check(r.ratio >= 0.5, fmt("finest/coarsest ratio %.3f", r.ratio));
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const ConvergenceReport r = pq_convergence_report(striped_sequence({5, 10, 20, 40}, 0.1, 0.0), 2.0, 2.0);
  const ConvergenceRow& row = r.rows.at(1);
  for (const auto& w : r.rows) o.keep(w.forward), o.keep(w.det);
  o.check(std::abs(row.forward - 0.4215) <= 0.02 * 0.4215, fmt("forward(n=10) = %.5f vs 0.4215", row.forward));
  o.check(r.slope_forward >= -0.7 && r.slope_forward <= -0.3, fmt("slope %.4f", r.slope_forward));
  o.check(std::abs(row.det - 0.392) <= 0.02 * 0.392, fmt("det(n=10) = %.5f vs 0.392", row.det));
  return o;
}

Outcome criterion_10() {
  Outcome o;
  const MetricField striped = striped_metric(ChartGrid::unit(2, striped_aligned_nodes(40)), 40, 0.1, 0.0);
  const double taxi = graph_geodesic(striped, Vec::Zero(2), Vec::Ones(2), 1600);
  o.keep(taxi);
  o.check(std::abs(taxi - 0.2) <= 0.1 * 0.2, fmt("striped corner distance %.5f vs 0.2", taxi));
  const double flat = graph_geodesic(euclidean_metric(ChartGrid::unit(2, 2)), Vec::Zero(2), Vec::Ones(2), 64);
  o.keep(flat);
  o.check(std::abs(flat - std::sqrt(2.0)) <= 1e-6, fmt("euclidean corner distance %.9f", flat));
  return o;
}

Outcome criterion_11() {
  Outcome o;
  const ChartGrid grid = ChartGrid::unit(2, 17);
  const MetricField g = euclidean_metric(grid);
  const MetricField h = euclidean_metric(ChartGrid::box(Vec::Constant(2, -2.0), Vec::Constant(2, 3.0), 2));
  const DiscreteMap f = DiscreteMap::sample(grid, analytic_map("reflection", 2));
  const double defect = metric_defect_energy(f, g, h, 2.0).energy;
  const double elastic = elastic_energy(f, g, h, 2.0).energy;
  const double area = grid.box_volume();
  o.keep(defect);
  o.keep(elastic);
  o.check(defect <= 1e-12, fmt("metric defect %.3g", defect));
  o.check(elastic >= 0.1 * area, fmt("elastic %.4g vs 0.1 area = %.3g", elastic, 0.1 * area));
  return o;
}

using Criterion = Outcome (*)();
const Criterion kCriteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,
                               criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
                               criterion_11};
const char* const kNames[] = {"algebraic identities",   "determinant derivative", "volume-distortion bound",
                              "strong Piola identity",  "weak Piola identity",    "null-Lagrangian",
                              "flat rigidity",          "sphere incompatibility", "manifold convergence",
                              "taxi-metric witness",    "orientation",            "determinism"};
const double kBudgetSeconds[] = {30, 10, 60, 120, 120, 60, 180, 600, 120, 60, 5};

std::vector<double> all_numbers() {
  std::vector<double> out;
  for (Criterion c : kCriteria) {
    const Outcome o = c();
    out.insert(out.end(), o.numbers.begin(), o.numbers.end());
  }
  return out;
}

Outcome criterion_12() {
  Outcome o;
  set_thread_count(1);
  const std::vector<double> a = all_numbers();
  set_thread_count(4);
  const std::vector<double> b = all_numbers();
  std::size_t differ = a.size() == b.size() ? 0 : std::max(a.size(), b.size());
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    differ += std::memcmp(&a[i], &b[i], sizeof(double)) != 0;
  }
  o.check(differ == 0 && !a.empty(), std::to_string(a.size()) + " values compared between 1 and 4 threads, " +
                                         std::to_string(differ) + " differ");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > 12) {
      std::fprintf(stderr, "usage: %s [criterion 1..12 ...]\n", argv[0]);
      return 2;
    }
    which.push_back(n);
  }
  if (which.empty()) {
    for (int n = 1; n <= 12; ++n) which.push_back(n);
  }

  int failed = 0;
  for (int n : which) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = n == 12 ? criterion_12() : kCriteria[n - 1]();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (n != 12) o.check(secs <= kBudgetSeconds[n - 1], fmt("runtime %.1f s within %.0f s", secs, kBudgetSeconds[n - 1]));
    failed += !o.pass;
    std::printf("criterion %2d %s  %s: %s\n", n, o.pass ? "PASS" : "FAIL", kNames[n - 1], o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
