#include "rigidlab/map_fields.hpp"
#include "rigidlab/quadrature.hpp"

#include "doctest.h"

#include <cmath>

using namespace rigidlab;

namespace {

Vec pt(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

const ChartGrid kFlatTarget = ChartGrid::box(pt(-3, -3), pt(4, 4), 2);

}  // namespace

TEST_SUITE("map_fields") {
  TEST_CASE("differential of identity and affine maps is exact") {
    const ChartGrid grid = ChartGrid::unit(2, 9);
    const CellQuadrature q(2, {2, 1});
    Mat A(2, 2);
    A << 1.3, -0.4, 0.2, 0.7;
    const Vec b = pt(0.1, -0.3);
    const DiscreteMap id = DiscreteMap::identity(grid);
    const DiscreteMap aff = DiscreteMap::sample(grid, [&](const Vec& x) { return Vec(A * x + b); });
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      for (int i = 0; i < q.size(); ++i) {
        CHECK((differential_at(id, c, q, i) - Mat::Identity(2, 2)).norm() < 1e-13);
        CHECK((differential_at(aff, c, q, i) - A).norm() < 1e-13);
      }
    }
    // interpolation reproduces the affine map inside cells
    CHECK((aff.evaluate(5, pt(0.3, 0.6)) - (A * (grid.cell_origin(5) + 0.125 * pt(0.3, 0.6)) + b)).norm() < 1e-14);
  }

  TEST_CASE("differential of (x^2, y) near the center") {
    const ChartGrid grid = ChartGrid::unit(2, 65);
    const DiscreteMap f = DiscreteMap::sample(grid, [](const Vec& x) { return pt(x(0) * x(0), x(1)); });
    const CellQuadrature q(2, {2, 1});
    // cell whose lower corner is (0.5, 0.5)
    const std::size_t cell = 32 + 64 * 32;
    for (int i = 0; i < q.size(); ++i) {
      CHECK(differential_at(f, cell, q, i)(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(differential_at(f, cell, q, i)(0, 1)) < 1e-12);
      CHECK(std::abs(differential_at(f, cell, q, i)(1, 0)) < 1e-12);
      const Vec x = grid.cell_origin(cell) + q.point(i) / 64.0;
      // exact for the bilinear interpolant: slope of the secant across the cell
      CHECK(differential_at(f, cell, q, i)(0, 0) == doctest::Approx(2 * 0.5 + 1.0 / 64).epsilon(1e-12));
      CHECK(std::abs(differential_at(f, cell, q, i)(0, 0) - 2 * x(0)) < 1.0 / 64);
    }
  }

  TEST_CASE("pullback metric oracles") {
    const ChartGrid grid = ChartGrid::unit(2, 11);
    const CellQuadrature q(2, {2, 1});
    const MetricField flat = euclidean_metric(kFlatTarget);
    CHECK((pullback_metric_at(DiscreteMap::identity(grid), flat, 3, q, 0).matrix() - Mat::Identity(2, 2)).norm() <
          1e-14);
    const DiscreteMap twice = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(2.0 * x); });
    CHECK((pullback_metric_at(twice, flat, 3, q, 0).matrix() - 4.0 * Mat::Identity(2, 2)).norm() < 1e-13);
    const MetricField striped = striped_metric(ChartGrid::unit(2, 11), 10, 0.1, 0.0);
    // cell 0 covers [0, 0.1]^2 and its Gauss points lie in the stripe around x = 0
    const CellQuadrature fine(2, {1, 1});
    const ChartGrid g201 = ChartGrid::unit(2, 201);
    const DiscreteMap id201 = DiscreteMap::identity(g201);
    CHECK((pullback_metric_at(id201, striped, 0, fine, 0).matrix() - 0.1 * Mat::Identity(2, 2)).norm() < 1e-14);
  }

  TEST_CASE("pointwise distortion oracles") {
    const ChartGrid grid = ChartGrid::unit(2, 201);
    const CellQuadrature q(2, {1, 1});
    const MetricField g = euclidean_metric(grid);
    const MetricField flat = euclidean_metric(kFlatTarget);
    CHECK(pointwise_distortion(make_jet(DiscreteMap::identity(grid), g, flat, 7, q, 0)) < 1e-13);
    const MetricField striped = striped_metric(ChartGrid::unit(2, 11), 10, 0.1, 0.0);
    CHECK(pointwise_distortion(make_jet(DiscreteMap::identity(grid), g, striped, 0, q, 0)) ==
          doctest::Approx(std::sqrt(2.0) * (1 - std::sqrt(0.1))).epsilon(1e-12));
    const DiscreteMap stretch = DiscreteMap::sample(grid, [](const Vec& x) { return pt(2 * x(0), x(1)); });
    CHECK(pointwise_distortion(make_jet(stretch, g, flat, 7, q, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("chart policy") {
    const ChartGrid grid = ChartGrid::unit(2, 5);
    const CellQuadrature q(2, {2, 1});
    const MetricField g = euclidean_metric(grid);
    const MetricField small = euclidean_metric(ChartGrid::box(pt(0, 0), pt(1, 1), 2));
    const DiscreteMap f = DiscreteMap::sample(grid, [](const Vec& x) { return Vec(3.0 * x); });
    CHECK_THROWS_AS(make_jet(f, g, small, 15, q, 0), ChartError);
    const QuadPointJet jet = make_jet(f, g, small, 15, q, 0, ChartPolicy::clamp);
    CHECK(jet.clamped);
    CHECK(small.chart.contains(jet.y));
  }

  TEST_CASE("refine oracles") {
    const ChartGrid grid = ChartGrid::unit(2, 5);
    Mat A(2, 2);
    A << 0.9, 0.3, -0.2, 1.1;
    const DiscreteMap aff = DiscreteMap::sample(grid, [&](const Vec& x) { return Vec(A * x); });
    const DiscreteMap fine = refine(aff);
    CHECK(fine.source().cells(0) == 8);
    for (std::size_t n = 0; n < fine.node_count(); ++n) {
      CHECK((fine.value(n) - A * fine.source().node_position(n)).norm() < 1e-14);
      CHECK(fine.constrained(n) == fine.source().is_boundary_node(n));
    }
  }

  TEST_CASE("property: refined interpolant of a smooth map has O(h^2) sup error") {
    auto fn = [](const Vec& x) { return pt(std::sin(x(0)) + x(1), std::exp(0.5 * x(0) * x(1))); };
    std::vector<double> errs;
    for (int nodes : {5, 9, 17, 33}) {
      const DiscreteMap f = refine(DiscreteMap::sample(ChartGrid::unit(2, nodes), fn));
      double e = 0.0;
      for (std::size_t n = 0; n < f.node_count(); ++n) {
        e = std::max(e, (f.value(n) - fn(f.source().node_position(n))).norm());
      }
      errs.push_back(e);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i - 1] / errs[i] > 3.5);
  }

  TEST_CASE("json round trip") {
    const ChartGrid grid(pt(-1, 0), pt(1, 2), {4, 3});
    DiscreteMap f = DiscreteMap::sample(grid, [](const Vec& x) { return pt(x(0) * x(1), 0.1 / 3.0 + x(0)); });
    nlohmann::json j;
    to_json(j, f);
    const DiscreteMap g = discrete_map_from_json(nlohmann::json::parse(j.dump()));
    CHECK(g.source() == grid);
    for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(g.values()[i] == f.values()[i]);
    CHECK(g.boundary_mask() == f.boundary_mask());
    nlohmann::json bad = j;
    bad["values"].erase(0);
    CHECK_THROWS(discrete_map_from_json(bad));
  }
}
