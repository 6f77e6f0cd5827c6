#include "rigidlab/algebra_suite.hpp"
#include "rigidlab/tensor_algebra.hpp"

#include "doctest.h"

#include <cmath>

using namespace rigidlab;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Mat diag(std::initializer_list<double> v) {
  Vec d(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

MetricMatrix I(int d) { return MetricMatrix::identity(d); }

}  // namespace

TEST_SUITE("tensor_algebra") {
  TEST_CASE("spd_sqrt oracles") {
    CHECK((spd_sqrt(I(2)).matrix() - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
    CHECK((spd_sqrt(MetricMatrix(diag({4, 9}))).matrix() - diag({2, 3})).norm() < 1e-14);
    AlgebraSampler s(3, 1);
    for (int k = 0; k < 50; ++k) {
      const MetricMatrix G = s.metric();
      const Mat S = spd_sqrt(G).matrix();
      CHECK((S * S - G.matrix()).norm() / G.matrix().norm() < 1e-10);
      CHECK((spd_inv_sqrt(G) * S - Mat::Identity(3, 3)).norm() < 1e-10);
    }
  }

  TEST_CASE("MetricMatrix rejects non-SPD input") {
    CHECK_THROWS_AS(MetricMatrix(diag({1, -1})), DomainError);
    CHECK_THROWS_AS(MetricMatrix(mat2(1, 2, 0, 1)), DomainError);
    CHECK_THROWS_AS(MetricMatrix(diag({1, 0})), DomainError);
    CHECK_THROWS_AS(MetricMatrix(diag({1, std::nan("")})), DomainError);
  }

  TEST_CASE("matrix_cofactor oracles") {
    CHECK((matrix_cofactor(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm() == 0.0);
    CHECK((matrix_cofactor(diag({2, 3})) - diag({3, 2})).norm() == 0.0);
    // hand-expanded cofactors
    Mat A(3, 3);
    A << 1, 2, 3, 0, 4, 5, 1, 0, 6;
    Mat C(3, 3);
    C << 24, 5, -4, -12, 3, 2, -2, -5, 4;
    CHECK((matrix_cofactor(A) - C).norm() < 1e-12);
    AlgebraSampler s(3, 2);
    for (int k = 0; k < 50; ++k) {
      const Mat B = s.matrix();
      CHECK((B * matrix_cofactor(B).transpose() - B.determinant() * Mat::Identity(3, 3)).norm() < 1e-12);
    }
  }

  TEST_CASE("intrinsic_transpose oracles") {
    const Mat A = mat2(0, 1, 0, 0);
    CHECK((intrinsic_transpose(A, I(2), MetricMatrix(diag({4, 1}))) - mat2(0, 0, 4, 0)).norm() < 1e-15);
    const Mat B = mat2(1, 2, 3, 4);
    CHECK((intrinsic_transpose(B, I(2), I(2)) - B.transpose()).norm() == 0.0);
  }

  TEST_CASE("intrinsic_det oracles") {
    const Mat B = mat2(1, 2, 3, 4);
    CHECK(intrinsic_det(B, I(2), I(2)) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(intrinsic_det(Mat::Identity(2, 2), MetricMatrix(4.0 * Mat::Identity(2, 2)), I(2)) ==
          doctest::Approx(0.25).epsilon(1e-14));
    AlgebraSampler s(2, 3);
    const MetricMatrix G = s.metric();
    CHECK(intrinsic_det(spd_sqrt(G).matrix(), G, I(2)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("intrinsic_cof oracles") {
    const Mat B = mat2(1, 2, 3, 4);
    CHECK((intrinsic_cof(B, I(2), I(2)) - matrix_cofactor(B)).norm() < 1e-14);
    AlgebraSampler s(2, 4);
    for (int k = 0; k < 20; ++k) {
      const MetricMatrix G = s.metric(), H = s.metric();
      const Mat R = spd_inv_sqrt(H) * s.rotation() * spd_sqrt(G).matrix();
      CHECK((intrinsic_cof(R, G, H) - R).norm() < 1e-10 * R.norm());
      // weakly conformal maps in d = 2
      const double lambda = 0.1 + k;
      CHECK((intrinsic_cof(lambda * R, G, H) - lambda * R).norm() < 1e-10 * lambda * R.norm());
    }
  }

  TEST_CASE("dist_to_so oracles") {
    AlgebraSampler s(2, 5);
    const MetricMatrix G = s.metric();
    CHECK(dist_to_so(spd_sqrt(G).matrix(), G, I(2)) < 1e-12);  // B = I
    CHECK(dist_to_so(diag({2, 1}), I(2), I(2)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dist_to_so(-Mat::Identity(3, 3), I(3), I(3)) == doctest::Approx(2.0).epsilon(1e-14));
    // reflection diag(1,-1): nearest rotation is I, distance 2
    CHECK(dist_to_so_euclidean(diag({1, -1})) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("dist_to_so agrees with brute force over SO(2)") {
    AlgebraSampler s(2, 6);
    for (int k = 0; k < 20; ++k) {
      const Mat B = s.matrix();
      double best = 1e300;
      for (int t = 0; t < 20000; ++t) {
        const double a = 2 * M_PI * t / 20000.0;
        best = std::min(best, (B - mat2(std::cos(a), -std::sin(a), std::sin(a), std::cos(a))).norm());
      }
      CHECK(dist_to_so_euclidean(B) <= best + 1e-12);
      CHECK(dist_to_so_euclidean(B) == doctest::Approx(best).epsilon(1e-6));
    }
  }

  TEST_CASE("signed singular values") {
    const auto sv = signed_singular_values(mat2(0, 3, 2, 0));
    CHECK(sv.sigma(0) == doctest::Approx(2.0));
    CHECK(sv.sigma(1) == doctest::Approx(3.0));
    CHECK(sv.signed_first == doctest::Approx(-2.0));
    CHECK(signed_singular_values(diag({2, 3})).signed_first == doctest::Approx(2.0));
  }

  TEST_CASE("nearest_rotation reports non-uniqueness") {
    CHECK(nearest_rotation(diag({1, 1})).unique);
    CHECK_FALSE(nearest_rotation(diag({-1, 1})).unique);
    const NearestRotation r = nearest_rotation(diag({2, 0.5}));
    CHECK((r.rotation - Mat::Identity(2, 2)).norm() < 1e-14);
  }

  TEST_CASE("pairing and det derivative oracles") {
    CHECK(pairing(Mat::Identity(3, 3), Mat::Identity(3, 3), I(3), I(3)) == doctest::Approx(3.0));
    CHECK(det_directional_derivative(Mat::Identity(2, 2), Mat::Identity(2, 2), I(2), I(2)) == doctest::Approx(2.0));
    Mat E = Mat::Zero(3, 3);
    E(0, 0) = 1.0;
    CHECK(det_directional_derivative(Mat::Identity(3, 3), E, I(3), I(3)) == doctest::Approx(1.0));
  }

  TEST_CASE("volume_bound_sides oracles") {
    const auto z = volume_bound_sides(Mat::Identity(2, 2), I(2), I(2));
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    const auto v = volume_bound_sides(diag({2, 1}), I(2), I(2));
    CHECK(v.lhs == doctest::Approx(1.0));
    CHECK(v.rhs == doctest::Approx(3.0));
  }

  TEST_CASE("property: frame invariance of Det and dist") {
    for (int d : {2, 3}) {
      AlgebraSampler s(d, 10 + d);
      for (int k = 0; k < 200; ++k) {
        const Mat A = s.matrix();
        const MetricMatrix G = s.metric(), H = s.metric();
        const Mat P = s.positive_basis_change(), Q = s.positive_basis_change();
        const Mat A2 = Q.inverse() * A * P;
        const MetricMatrix G2(P.transpose() * G.matrix() * P), H2(Q.transpose() * H.matrix() * Q);
        CHECK(intrinsic_det(A2, G2, H2) == doctest::Approx(intrinsic_det(A, G, H)).epsilon(1e-10).scale(1.0));
        CHECK(dist_to_so(A2, G2, H2) == doctest::Approx(dist_to_so(A, G, H)).epsilon(1e-10).scale(1.0));
      }
    }
  }

  TEST_CASE("property: adjoint identity and cofactor identities") {
    for (int d : {2, 3}) {
      AlgebraSampler s(d, 20 + d);
      for (int k = 0; k < 200; ++k) {
        const Mat A = s.matrix();
        const MetricMatrix G = s.metric(), H = s.metric();
        const Vec v = s.vector(), w = s.vector();
        const Mat At = intrinsic_transpose(A, G, H);
        CHECK((A * v).dot(H.matrix() * w) == doctest::Approx(v.dot(G.matrix() * (At * w))).epsilon(1e-10));
        const Mat C = intrinsic_cof(A, G, H);
        const double det = intrinsic_det(A, G, H);
        const double scale = At.norm() * C.norm() + std::abs(det);
        CHECK((At * C - det * Mat::Identity(d, d)).norm() < 1e-9 * scale);
        CHECK((intrinsic_transpose(C, G, H) * A - det * Mat::Identity(d, d)).norm() < 1e-9 * scale);
        CHECK(det_directional_derivative(A, v * w.transpose(), G, H) ==
              doctest::Approx(pairing(C, v * w.transpose(), G, H)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("property: volume bound and distance are non-negative and bounded") {
    AlgebraSampler s(3, 30);
    for (int k = 0; k < 500; ++k) {
      const Mat A = s.matrix(2.0);
      const MetricMatrix G = s.metric(), H = s.metric();
      const auto vb = volume_bound_sides(A, G, H);
      CHECK(vb.lhs <= vb.rhs * (1 + 1e-12) + 1e-12);
      CHECK(dist_to_so(A, G, H) >= 0.0);
    }
  }

  TEST_CASE("algebra suite passes clean and fails with the injected fault") {
    for (int d : {2, 3}) {
      AlgebraSuiteConfig cfg;
      cfg.dim = d;
      cfg.cases = 500;
      cfg.fd_cases = 100;
      CHECK(run_algebra_suite(cfg).all_passed());
      cfg.inject_cofactor_fault = true;
      CHECK_FALSE(run_algebra_suite(cfg).all_passed());
    }
  }
}
