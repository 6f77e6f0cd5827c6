#include "rigidlab/experiments.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace rigidlab;

namespace {

Vec pt(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("analytic maps") {
    const Vec x = pt(0.3, 0.5);
    CHECK((analytic_map("identity", 2)(x) - x).norm() == 0.0);
    CHECK((analytic_map({{"name", "scale"}, {"factor", 3.0}}, 2)(x) - 3.0 * x).norm() == 0.0);
    CHECK((analytic_map("reflection", 2)(x) - pt(0.5, 0.3)).norm() == 0.0);
    const Vec r = analytic_map({{"name", "rotation"}, {"angle", M_PI / 2}}, 2)(pt(1, 0));
    CHECK((r - pt(0, 1)).norm() < 1e-15);
    const nlohmann::json aff = {{"name", "affine"}, {"matrix", {{1, 2}, {3, 4}}}, {"offset", {1, 1}}};
    CHECK((analytic_map(aff, 2)(pt(1, 1)) - pt(4, 8)).norm() == 0.0);
    CHECK_THROWS_AS(analytic_map("warp", 2), std::invalid_argument);
  }

  TEST_CASE("euclidean sequence has all norms zero") {
    const ConvergenceReport r = pq_convergence_report(euclidean_sequence({2, 4, 8}), 2.0, 2.0);
    for (const auto& row : r.rows) {
      CHECK(row.forward == 0.0);
      CHECK(row.inverse == 0.0);
      CHECK(row.det == 0.0);
      CHECK(row.det_inverse == 0.0);
    }
    CHECK(std::isnan(r.slope_forward));
  }

  TEST_CASE("striped sequence matches hand formulas") {
    const ConvergenceReport r = pq_convergence_report(striped_sequence({10, 20}, 0.1, 0.0), 2.0, 2.0);
    const double measure10 = 2.0 / 10 - 1.0 / 100;
    CHECK(r.rows[0].forward == doctest::Approx(std::sqrt(2 * std::pow(1 - std::sqrt(0.1), 2) * measure10)).epsilon(1e-10));
    CHECK(r.rows[0].det == doctest::Approx(std::sqrt(0.81 * measure10)).epsilon(1e-10));
    CHECK(r.rows[0].forward == doctest::Approx(0.4215).epsilon(0.02));
    CHECK(r.rows[0].det == doctest::Approx(0.392).epsilon(0.02));
    CHECK(r.rows[1].forward < r.rows[0].forward);
    CHECK(r.rows[1].det < r.rows[0].det);
    for (const auto& row : r.rows) {
      CHECK(row.inverse >= 0.0);
      CHECK(row.det_inverse >= 0.0);
    }
  }

  TEST_CASE("smoothed striped sequence decays at about n^-1/2") {
    const ConvergenceReport r = pq_convergence_report(striped_sequence({4, 8, 16}, 0.1, -1.0), 2.0, 2.0);
    CHECK(r.slope_forward >= -0.7);
    CHECK(r.slope_forward <= -0.3);
  }

  TEST_CASE("loglog slope") {
    CHECK(loglog_slope({1, 2, 4}, {1, 0.5, 0.25}) == doctest::Approx(-1.0));
    CHECK(loglog_slope({10, 100}, {1, 10}) == doctest::Approx(1.0));
  }

  TEST_CASE("graph geodesic oracles") {
    const MetricField e = euclidean_metric(ChartGrid::unit(2, 2));
    CHECK(graph_geodesic(e, pt(0, 0), pt(1, 0), 32) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(graph_geodesic(e, pt(0, 0), pt(1, 1), 32) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    // 8-neighbour metrication: off-grid directions within about 8 percent
    const double d = graph_geodesic(e, pt(0, 0), pt(1, 0.5), 64);
    CHECK(d >= std::sqrt(1.25) - 1e-12);
    CHECK(d <= 1.09 * std::sqrt(1.25));
    CHECK_THROWS_AS(graph_geodesic(e, pt(0, 0), pt(2, 0), 32), ChartError);
    CHECK_THROWS_AS(graph_geodesic(e, pt(0, 0), pt(1, 0), 8), DomainError);
  }

  TEST_CASE("graph geodesic on a scaled metric") {
    // constant metric c^2 I scales all lengths by c
    const MetricField sph = sphere_conformal_metric(ChartGrid::box(pt(-0.01, -0.01), pt(0.01, 0.01), 3), 1.0);
    CHECK(graph_geodesic(sph, pt(-0.01, 0), pt(0.01, 0), 64) == doctest::Approx(0.04).epsilon(1e-3));
  }

  TEST_CASE("property: geodesic symmetry and triangle inequality") {
    const MetricField s = striped_metric(ChartGrid::unit(2, 21), 5, 0.2, 0.02);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
      const Vec a = pt(u(rng), u(rng)), b = pt(u(rng), u(rng)), c = pt(u(rng), u(rng));
      const double ab = graph_geodesic(s, a, b, 64), ba = graph_geodesic(s, b, a, 64);
      CHECK(std::abs(ab - ba) <= 1e-12);
      CHECK(ab <= graph_geodesic(s, a, c, 64) + graph_geodesic(s, c, b, 64) + 1e-12);
    }
  }

  TEST_CASE("graph geodesic of the striped metric stays above the taxi value") {
    const MetricField s = striped_metric(ChartGrid::unit(2, striped_aligned_nodes(10)), 10, 0.1, 0.0);
    const double d = graph_geodesic(s, pt(0, 0), pt(1, 1), 200);
    CHECK(d > 0.2);
    CHECK(d < std::sqrt(2.0));
  }

  TEST_CASE("smooth perturbation") {
    const ChartGrid grid = ChartGrid::unit(2, 17);
    const auto u = smooth_perturbation(grid, 0.05, 9);
    double sup = 0.0;
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      const double m = std::hypot(u[2 * n], u[2 * n + 1]);
      sup = std::max(sup, m);
      if (grid.is_boundary_node(n)) CHECK(m == 0.0);
    }
    CHECK(sup == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(smooth_perturbation(grid, 0.05, 9) == u);
    CHECK(smooth_perturbation(grid, 0.05, 10) != u);
  }

  TEST_CASE("flat rigidity runs") {
    FlatRunConfig cfg;
    cfg.cells = 8;
    const FlatRunReport id = rigidity_flat_run(cfg);
    CHECK(id.final_energy < 1e-10);
    CHECK(id.sup_to_target < 1e-5);
    cfg.boundary = BoundaryKind::rotated;
    const FlatRunReport rot = rigidity_flat_run(cfg);
    CHECK(rot.sup_to_target < 1e-5);
    CHECK(rot.sup_to_rigid < 1e-5);
    cfg.boundary = BoundaryKind::reflected;
    cfg.optimizer.max_iters = 200;
    const FlatRunReport refl = rigidity_flat_run(cfg);
    CHECK(refl.final_energy > 0.1 * refl.area);
  }

  TEST_CASE("sphere run stays bounded away from zero and shrinks with the cap") {
    SphereRunConfig cfg;
    cfg.resolutions = {4, 8};
    cfg.sweep_sides = {0.8, 0.4};
    cfg.sweep_cells = 8;
    const SphereRunReport r = rigidity_sphere_run(cfg);
    REQUIRE(r.rows.size() == 2);
    for (const auto& row : r.rows) CHECK(row.final_energy > 0.0);
    CHECK(r.ratio >= 0.5);
    CHECK(r.sweep_monotone);
    CHECK(r.boundary_scale > 0.0);
  }
}
