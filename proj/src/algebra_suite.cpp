#include "rigidlab/algebra_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rigidlab {

Mat AlgebraSampler::matrix(double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Mat A(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) A(i, j) = n(rng_);
  }
  return A;
}

Mat AlgebraSampler::rotation() {
  const Eigen::HouseholderQR<Mat> qr(matrix());
  Mat Q = qr.householderQ();
  const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim_; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  if (Q.determinant() < 0.0) Q.col(0) = -Q.col(0);
  return Q;
}

MetricMatrix AlgebraSampler::metric() {
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  const Mat Q = rotation();
  Vec lam(dim_);
  for (int i = 0; i < dim_; ++i) lam(i) = std::exp(u(rng_));
  const Mat G = Q * lam.asDiagonal() * Q.transpose();
  return MetricMatrix(0.5 * (G + G.transpose()));
}

Mat AlgebraSampler::positive_basis_change() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec s(dim_);
  for (int i = 0; i < dim_; ++i) s(i) = std::exp(u(rng_));
  return rotation() * s.asDiagonal() * rotation();
}

Vec AlgebraSampler::vector() {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(dim_);
  for (int i = 0; i < dim_; ++i) v(i) = n(rng_);
  return v;
}

bool AlgebraSuiteReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed(); });
}

namespace {

struct Tally {
  PropertyResult r;
  Tally(std::string name, double tol) { r.name = std::move(name), r.tolerance = tol; }
  // err is compared against the tolerance; fail_when_below flips the sense
  void add(double err, bool fail_when_below = false) {
    ++r.cases;
    const bool bad = !std::isfinite(err) || (fail_when_below ? err <= r.tolerance : err > r.tolerance);
    if (bad) ++r.failures;
    if (fail_when_below) {
      r.worst = r.cases == 1 ? err : std::min(r.worst, err);
    } else {
      r.worst = std::max(r.worst, err);
    }
  }
};

}  // namespace

AlgebraSuiteReport run_algebra_suite(const AlgebraSuiteConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > kMaxDim) throw DomainError("algebra suite: dim out of range");
  const int d = cfg.dim;
  AlgebraSampler s(d, cfg.seed);
  const Mat I = Mat::Identity(d, d);

  std::function<Mat(const Mat&, const MetricMatrix&, const MetricMatrix&)> cof =
      [&](const Mat& A, const MetricMatrix& G, const MetricMatrix& H) {
        Mat C = intrinsic_cof(A, G, H);
        if (cfg.inject_cofactor_fault) C(0, 0) = -C(0, 0);
        return C;
      };

  Tally cof_left("transpose_cof_equals_det", 1e-9);
  Tally cof_right("cof_transpose_equals_det", 1e-9);
  Tally adjoint("transpose_adjoint", 1e-10);
  Tally so_forward("so_fixed_point", 1e-9);
  Tally so_converse("so_converse", 1e-3);
  Tally frame("frame_invariance", 1e-10);
  Tally vol("volume_bound", 1e-9);
  Tally deriv("det_derivative", 1e-6);

  for (std::size_t c = 0; c < cfg.cases; ++c) {
    const Mat A = s.matrix();
    const MetricMatrix G = s.metric(), H = s.metric();
    const Mat At = intrinsic_transpose(A, G, H);
    const Mat C = cof(A, G, H);
    const double det = intrinsic_det(A, G, H);
    const double scale = At.norm() * C.norm() + std::abs(det);
    cof_left.add((At * C - det * I).norm() / scale);
    cof_right.add((intrinsic_transpose(C, G, H) * A - det * I).norm() / scale);

    const Vec v = s.vector(), w = s.vector();
    const double lhs = (A * v).dot(H.matrix() * w), rhs = v.dot(G.matrix() * (At * w));
    adjoint.add(std::abs(lhs - rhs) / ((A * v).norm() * w.norm() * H.matrix().norm() +
                                       v.norm() * (At * w).norm() * G.matrix().norm()));

    // isometries built from a rotation are fixed points of Cof with Det = 1
    const Mat Q = spd_inv_sqrt(H) * s.rotation() * spd_sqrt(G).matrix();
    so_forward.add(std::max(std::abs(intrinsic_det(Q, G, H) - 1.0), (cof(Q, G, H) - Q).norm() / Q.norm()));

    // Away from SO(G,H) at least one of the two equalities must fail.
    if (dist_to_so(A, G, H) > 0.1) {
      so_converse.add(std::max(std::abs(det - 1.0), (C - A).norm()), true);
    }

    const Mat P = s.positive_basis_change(), R = s.positive_basis_change();
    const Mat A2 = R.inverse() * A * P;
    const MetricMatrix G2(P.transpose() * G.matrix() * P), H2(R.transpose() * H.matrix() * R);
    const double d1 = dist_to_so(A, G, H), d2 = dist_to_so(A2, G2, H2);
    frame.add(std::max(std::abs(intrinsic_det(A2, G2, H2) - det) / (1.0 + std::abs(det)),
                       std::abs(d2 - d1) / (1.0 + d1)));

    const VolumeBoundSides vb = volume_bound_sides(A, G, H);
    vol.add((vb.lhs - vb.rhs) / (1.0 + vb.rhs));
  }

  for (std::size_t c = 0; c < cfg.fd_cases; ++c) {
    const Mat A = s.matrix(), dA = s.matrix();
    const MetricMatrix G = s.metric(), H = s.metric();
    const double step = 1e-5;
    const double fd = (intrinsic_det(A + step * dA, G, H) - intrinsic_det(A - step * dA, G, H)) / (2.0 * step);
    const double an = pairing(cof(A, G, H), dA, G, H);
    const Mat C = cof(A, G, H);
    const double denom = std::max(std::abs(an), 1e-3 * std::sqrt(pairing(C, C, G, H) * pairing(dA, dA, G, H)));
    deriv.add(std::abs(an - fd) / denom);
  }

  AlgebraSuiteReport rep;
  rep.dim = d;
  rep.seed = cfg.seed;
  for (auto* t : {&cof_left, &cof_right, &adjoint, &so_forward, &so_converse, &frame, &vol, &deriv}) {
    rep.properties.push_back(t->r);
  }
  return rep;
}

}  // namespace rigidlab
