#include "rigidlab/experiments.hpp"
#include "rigidlab/functionals.hpp"

#include "doctest.h"

#include <cmath>

using namespace rigidlab;

namespace {

Vec pt(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

const ChartGrid kTargetBox = ChartGrid::box(pt(-3, -3), pt(4, 4), 2);

DiscreteMap perturbed(const ChartGrid& grid, const std::function<Vec(const Vec&)>& fn, double amp,
                      std::uint64_t seed) {
  DiscreteMap f = DiscreteMap::sample(grid, fn);
  const auto u = smooth_perturbation(grid, amp, seed);
  auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += u[i];
  return f;
}

double fd_derivative(DiscreteMap f, std::size_t entry, const MetricField& g, const MetricField& h, double p) {
  const double step = 1e-6;
  const double v0 = f.values()[entry];
  f.values()[entry] = v0 + step;
  const double ep = elastic_energy(f, g, h, p).energy;
  f.values()[entry] = v0 - step;
  const double em = elastic_energy(f, g, h, p).energy;
  return (ep - em) / (2 * step);
}

}  // namespace

TEST_SUITE("functionals") {
  TEST_CASE("elastic energy oracles") {
    const ChartGrid grid = ChartGrid::unit(2, 9);
    const MetricField g = euclidean_metric(grid);
    const MetricField h = euclidean_metric(kTargetBox);
    for (double p : {1.0, 2.0, 3.5}) {
      CHECK(elastic_energy(DiscreteMap::identity(grid), g, h, p).energy == doctest::Approx(0.0));
    }
    const DiscreteMap twice = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(2.0 * x); });
    CHECK(elastic_energy(twice, g, h, 2.0).energy == doctest::Approx(2.0).epsilon(1e-13));
    const EnergyReport r = elastic_energy(twice, g, h, 1.0);
    CHECK(r.energy == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(r.per_cell.size() == grid.cell_count());
    CHECK(r.per_cell[5] == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("elastic energy into the striped target") {
    // stripe-aligned grid and quadrature make the raw indicator exact
    const int n = 10;
    const ChartGrid grid = ChartGrid::unit(2, 2 * n + 1);
    EvalOptions o;
    o.rule = {1, n};
    const double e = elastic_energy(DiscreteMap::identity(grid), euclidean_metric(grid),
                                    striped_metric(ChartGrid::unit(2, 11), n, 0.1, 0.0), 2.0, o)
                         .energy;
    CHECK(e == doctest::Approx(2 * std::pow(1 - std::sqrt(0.1), 2) * 0.19).epsilon(1e-12));
    CHECK(e == doctest::Approx(0.1777).epsilon(0.02));
  }

  TEST_CASE("metric defect oracles") {
    const ChartGrid grid = ChartGrid::unit(2, 9);
    const MetricField g = euclidean_metric(grid);
    const MetricField h = euclidean_metric(kTargetBox);
    CHECK(metric_defect_energy(DiscreteMap::identity(grid), g, h, 2.0).energy == doctest::Approx(0.0));
    const DiscreteMap twice = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(2.0 * x); });
    CHECK(metric_defect_energy(twice, g, h, 1.0).energy == doctest::Approx(std::sqrt(18.0)).epsilon(1e-13));
    const DiscreteMap refl = DiscreteMap::sample(grid, analytic_map("reflection", 2));
    CHECK(metric_defect_energy(refl, g, h, 2.0).energy < 1e-24);
    CHECK(elastic_energy(refl, g, h, 2.0).energy == doctest::Approx(4.0).epsilon(1e-13));
  }

  TEST_CASE("jacobian functional oracles") {
    const ChartGrid grid = ChartGrid::unit(2, 9);
    const MetricField g = euclidean_metric(grid);
    const MetricField h = euclidean_metric(kTargetBox);
    CHECK(jacobian_functional(DiscreteMap::identity(grid), g, h) == doctest::Approx(1.0).epsilon(1e-14));
    const DiscreteMap twice = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(2.0 * x); });
    CHECK(jacobian_functional(twice, g, h) == doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("property: jacobian functional is a null-Lagrangian") {
    const ChartGrid grid = ChartGrid::unit(2, 129);
    const MetricField g = euclidean_metric(grid);
    const MetricField h = euclidean_metric(kTargetBox);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const DiscreteMap f = perturbed(grid, [](const Vec& x) { return x; }, 0.1, seed);
      CHECK(jacobian_functional(f, g, h) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("property: energy densities are non-negative") {
    const ChartGrid grid = ChartGrid::unit(2, 17);
    const MetricField g = sphere_conformal_metric(grid, 1.0);
    const MetricField h = euclidean_metric(kTargetBox);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const DiscreteMap f = perturbed(grid, [](const Vec& x) { return Vec(1.5 * x); }, 0.05, seed);
      const double e2 = elastic_energy(f, g, h, 2.0).energy;
      CHECK(e2 >= 0.0);
      for (double v : elastic_energy(f, g, h, 2.0).per_cell) CHECK(v >= 0.0);
    }
  }

  TEST_CASE("gradient oracles") {
    const ChartGrid grid = ChartGrid::unit(2, 9);
    const MetricField g = euclidean_metric(grid);
    const MetricField h = euclidean_metric(kTargetBox);
    const EnergyGradient z = energy_gradient(DiscreteMap::identity(grid), g, h, 2.0);
    CHECK(gradient_max_norm(DiscreteMap::identity(grid), z.gradient) < 1e-14);
    CHECK_THROWS_AS(energy_gradient(DiscreteMap::identity(grid), g, h, 1.0), DomainError);

    // 2 * identity with everything free: compare an interior entry with FD
    DiscreteMap twice = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(2.0 * x); }, BoundaryMask::none);
    const EnergyGradient eg = energy_gradient(twice, g, h, 2.0);
    const std::size_t node = grid.node_index({4, 4, 0});
    for (int a = 0; a < 2; ++a) {
      CHECK(eg.gradient[2 * node + a] == doctest::Approx(fd_derivative(twice, 2 * node + a, g, h, 2.0)).epsilon(1e-6));
    }
    CHECK(eg.energy == doctest::Approx(elastic_energy(twice, g, h, 2.0).energy));
  }

  TEST_CASE("property: gradient matches finite differences on curved metrics") {
    const ChartGrid grid = ChartGrid::unit(2, 7);
    const MetricField g = sphere_conformal_metric(grid, 1.0);
    const MetricField h = sphere_conformal_metric(kTargetBox, 2.0);
    for (double p : {2.0, 3.0}) {
      const DiscreteMap f = perturbed(grid, [](const Vec& x) { return pt(1.2 * x(0) + 0.2 * x(1), 0.9 * x(1)); },
                                      0.05, 17);
      const EnergyGradient eg = energy_gradient(f, g, h, p);
      double worst = 0.0, scale = 0.0;
      for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (f.constrained(n)) {
          CHECK(eg.gradient[2 * n] == 0.0);
          CHECK(eg.gradient[2 * n + 1] == 0.0);
          continue;
        }
        for (int a = 0; a < 2; ++a) {
          const double fd = fd_derivative(f, 2 * n + a, g, h, p);
          worst = std::max(worst, std::abs(eg.gradient[2 * n + a] - fd));
          scale = std::max(scale, std::abs(fd));
        }
      }
      CHECK(worst / scale < 1e-5);
    }
  }

  TEST_CASE("gradient falls back to finite differences at non-unique projections") {
    // reflection: nearest rotation is not unique at every point
    const ChartGrid grid = ChartGrid::unit(2, 5);
    const DiscreteMap refl = DiscreteMap::sample(grid, analytic_map("reflection", 2), BoundaryMask::none);
    const EnergyGradient eg =
        energy_gradient(refl, euclidean_metric(grid), euclidean_metric(kTargetBox), 2.0);
    CHECK(eg.fd_fallbacks > 0);
    for (double v : eg.gradient) CHECK(std::isfinite(v));
  }

  TEST_CASE("discrete volume bound and det deviation") {
    const ChartGrid grid = ChartGrid::unit(2, 17);
    const MetricField g = euclidean_metric(grid);
    const MetricField h = euclidean_metric(kTargetBox);
    const DiscreteMap twice = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(2.0 * x); });
    const VolumeBoundSides vb = discrete_volume_bound(twice, g, h);
    CHECK(vb.lhs == doctest::Approx(3.0));
    CHECK(vb.rhs == doctest::Approx(std::pow(std::sqrt(2.0) + 1, 2) - 1));
    CHECK(det_deviation_norm(twice, g, h, 2.0) == doctest::Approx(3.0));
    CHECK(det_deviation_norm(DiscreteMap::identity(grid), g, h, 2.0) == doctest::Approx(0.0));
  }

  TEST_CASE("serial and parallel evaluation agree bitwise") {
    const ChartGrid grid = ChartGrid::unit(2, 33);
    const MetricField g = sphere_conformal_metric(grid, 1.0);
    const MetricField h = euclidean_metric(kTargetBox);
    const DiscreteMap f = perturbed(grid, [](const Vec& x) { return x; }, 0.05, 3);
    EvalOptions serial, parallel;
    serial.exec = Exec::serial;
    parallel.exec = Exec::parallel;
    CHECK(elastic_energy(f, g, h, 2.0, serial).energy == elastic_energy(f, g, h, 2.0, parallel).energy);
    CHECK(jacobian_functional(f, g, h, serial) == jacobian_functional(f, g, h, parallel));
    const auto a = energy_gradient(f, g, h, 2.0, serial), b = energy_gradient(f, g, h, 2.0, parallel);
    CHECK(a.energy == b.energy);
    CHECK(a.gradient == b.gradient);
    for (int threads : {1, 2, 3}) {
      set_thread_count(threads);
      CHECK(elastic_energy(f, g, h, 2.0, parallel).energy == elastic_energy(f, g, h, 2.0, serial).energy);
    }
  }

  TEST_CASE("chart errors propagate under the strict policy") {
    const ChartGrid grid = ChartGrid::unit(2, 5);
    const DiscreteMap far = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(10.0 * x); });
    const MetricField g = euclidean_metric(grid);
    const MetricField h = euclidean_metric(kTargetBox);
    CHECK_THROWS_AS(elastic_energy(far, g, h, 2.0), ChartError);
    EvalOptions clamp;
    clamp.policy = ChartPolicy::clamp;
    CHECK(elastic_energy(far, g, h, 2.0, clamp).clamped_points > 0);
  }
}
