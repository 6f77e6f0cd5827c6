#include "rigidlab/tensor_algebra.hpp"

#include <cmath>
#include <string>

namespace rigidlab {
namespace {

double small_det(const Mat& A) {
  switch (A.rows()) {
    case 0:
      return 1.0;
    case 1:
      return A(0, 0);
    case 2:
      return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    case 3:
      return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
             A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
             A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    default:
      return Eigen::PartialPivLU<Mat>(A).determinant();
  }
}

void require_square(const Mat& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() < 1 || A.rows() > kMaxDim) {
    throw DomainError(std::string(what) + ": expected a square matrix of dimension 1.." +
                      std::to_string(kMaxDim));
  }
}

void require_compatible(const Mat& A, const MetricMatrix& G, const MetricMatrix& H,
                        const char* what) {
  require_square(A, what);
  if (G.dim() != A.cols() || H.dim() != A.rows()) {
    throw DomainError(std::string(what) + ": dimension mismatch between map and metrics");
  }
}

// Symmetric eigen-decomposition based square root, with the closed form
// sqrt(G) = (G + sqrt(det G) I) / sqrt(tr G + 2 sqrt(det G)) in 2D.
Mat sqrt_impl(const Mat& G, bool inverse) {
  const auto d = G.rows();
  if (d == 1) {
    const double s = std::sqrt(G(0, 0));
    return Mat::Constant(1, 1, inverse ? 1.0 / s : s);
  }
  if (d == 2) {
    const double s = std::sqrt(small_det(G));
    const double t = std::sqrt(G(0, 0) + G(1, 1) + 2.0 * s);
    Mat S(2, 2);
    if (!inverse) {
      S << (G(0, 0) + s) / t, G(0, 1) / t, G(1, 0) / t, (G(1, 1) + s) / t;
    } else {
      // inverse of the matrix above: adj / det, det(S) = sqrt(det G)
      const double k = 1.0 / (t * s);
      S << (G(1, 1) + s) * k, -G(0, 1) * k, -G(1, 0) * k, (G(0, 0) + s) * k;
    }
    return S;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  Vec lam = es.eigenvalues().cwiseSqrt();
  if (inverse) lam = lam.cwiseInverse();
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

MetricMatrix::MetricMatrix(const Mat& entries) : m_(entries) {
  require_square(m_, "MetricMatrix");
  if (!m_.allFinite()) throw DomainError("MetricMatrix: non-finite entries");
  const double scale = m_.cwiseAbs().maxCoeff();
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("MetricMatrix: matrix is not symmetric");
  }
  const double tr = m_.trace();
  double lambda_min;
  if (m_.rows() == 1) {
    lambda_min = m_(0, 0);
  } else if (m_.rows() == 2) {
    const double a = m_(0, 0), b = m_(0, 1), d = m_(1, 1);
    lambda_min = 0.5 * (a + d - std::hypot(a - d, 2.0 * b));
  } else {
    lambda_min = Eigen::SelfAdjointEigenSolver<Mat>(m_, Eigen::EigenvaluesOnly).eigenvalues()(0);
  }
  if (!(tr > 0.0) || !(lambda_min > 1e-12 * tr)) {
    throw DomainError("MetricMatrix: matrix is not positive definite");
  }
}

MetricMatrix MetricMatrix::trusted(const Mat& entries) { return MetricMatrix(entries, Unchecked{}); }

MetricMatrix MetricMatrix::identity(int dim) {
  return MetricMatrix(Mat::Identity(dim, dim), Unchecked{});
}

double MetricMatrix::det() const { return small_det(m_); }

Mat MetricMatrix::inverse() const {
  if (m_.rows() == 2) {
    const double k = 1.0 / det();
    Mat inv(2, 2);
    inv << m_(1, 1) * k, -m_(0, 1) * k, -m_(1, 0) * k, m_(0, 0) * k;
    return inv;
  }
  return m_.llt().solve(Mat::Identity(m_.rows(), m_.cols()));
}

SignedSingularValues signed_singular_values(const Mat& B) {
  require_square(B, "signed_singular_values");
  SignedSingularValues out;
  const auto d = B.rows();
  if (d == 2) {
    // sigma_max = (P + Q) / 2, sigma_min = |P - Q| / 2 and P^2 - Q^2 = 4 det B,
    // so (P - Q) / 2 already carries the sign of the determinant.
    const double P = std::hypot(B(0, 0) + B(1, 1), B(1, 0) - B(0, 1));
    const double Q = std::hypot(B(0, 0) - B(1, 1), B(0, 1) + B(1, 0));
    out.sigma.resize(2);
    out.sigma << 0.5 * std::abs(P - Q), 0.5 * (P + Q);
    out.signed_first = 0.5 * (P - Q);
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(B);
  out.sigma = svd.singularValues().reverse();
  out.signed_first = small_det(B) < 0.0 ? -out.sigma(0) : out.sigma(0);
  return out;
}

MetricMatrix spd_sqrt(const MetricMatrix& G) { return MetricMatrix::trusted(sqrt_impl(G.matrix(), false)); }

Mat spd_inv_sqrt(const MetricMatrix& G) { return sqrt_impl(G.matrix(), true); }

Mat matrix_cofactor(const Mat& A) {
  require_square(A, "matrix_cofactor");
  const auto d = A.rows();
  Mat C(d, d);
  if (d == 1) {
    C(0, 0) = 1.0;
  } else if (d == 2) {
    C << A(1, 1), -A(1, 0), -A(0, 1), A(0, 0);
  } else if (d == 3) {
    const Eigen::Vector3d a0 = A.col(0), a1 = A.col(1), a2 = A.col(2);
    C.col(0) = a1.cross(a2);
    C.col(1) = a2.cross(a0);
    C.col(2) = a0.cross(a1);
  } else {
    Mat minor(d - 1, d - 1);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index r = 0, mr = 0; r < d; ++r) {
          if (r == i) continue;
          for (Eigen::Index c = 0, mc = 0; c < d; ++c) {
            if (c == j) continue;
            minor(mr, mc++) = A(r, c);
          }
          ++mr;
        }
        const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        C(i, j) = sign * Eigen::PartialPivLU<Mat>(minor).determinant();
      }
    }
  }
  return C;
}

Mat intrinsic_transpose(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H) {
  require_compatible(A, G, H, "intrinsic_transpose");
  return G.inverse() * A.transpose() * H.matrix();
}

double intrinsic_det(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H) {
  require_compatible(A, G, H, "intrinsic_det");
  return std::sqrt(H.det() / G.det()) * small_det(A);
}

Mat intrinsic_cof(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H) {
  require_compatible(A, G, H, "intrinsic_cof");
  return std::sqrt(H.det() / G.det()) * H.inverse() * matrix_cofactor(A) * G.matrix();
}

Mat frame_reduce(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H) {
  require_compatible(A, G, H, "frame_reduce");
  return sqrt_impl(H.matrix(), false) * A * sqrt_impl(G.matrix(), true);
}

double dist_to_so_euclidean(const Mat& B) {
  const SignedSingularValues s = signed_singular_values(B);
  double sum = (s.signed_first - 1.0) * (s.signed_first - 1.0);
  for (Eigen::Index i = 1; i < s.sigma.size(); ++i) sum += (s.sigma(i) - 1.0) * (s.sigma(i) - 1.0);
  return std::sqrt(sum);
}

double dist_to_so(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H) {
  return dist_to_so_euclidean(frame_reduce(A, G, H));
}

NearestRotation nearest_rotation(const Mat& B, double tol) {
  require_square(B, "nearest_rotation");
  const auto d = B.rows();
  NearestRotation out;
  if (d == 1) {
    out.rotation = Mat::Identity(1, 1);
    return out;
  }
  if (d == 2) {
    // maximizer of tr(R^t B) over rotation angles; margin r_1 + sigma_2 = P
    const double cs = B(0, 0) + B(1, 1);
    const double sn = B(1, 0) - B(0, 1);
    const double P = std::hypot(cs, sn);
    const double Q = std::hypot(B(0, 0) - B(1, 1), B(0, 1) + B(1, 0));
    out.unique = P > tol * std::max(1.0, 0.5 * (P + Q));
    out.rotation.resize(2, 2);
    if (P > 0.0) {
      out.rotation << cs / P, -sn / P, sn / P, cs / P;
    } else {
      out.rotation.setIdentity();
    }
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat U = svd.matrixU();
  const Mat V = svd.matrixV();
  const Vec& sig = svd.singularValues();  // descending
  Vec D = Vec::Ones(d);
  if (small_det(U * V.transpose()) < 0.0) D(d - 1) = -1.0;
  out.rotation = U * D.asDiagonal() * V.transpose();
  const double r1 = small_det(B) < 0.0 ? -sig(d - 1) : sig(d - 1);
  out.unique = (r1 + sig(d - 2)) > tol * std::max(1.0, sig(0));
  return out;
}

double pairing(const LinMapMatrix& A, const LinMapMatrix& B, const MetricMatrix& G,
               const MetricMatrix& H) {
  require_compatible(A, G, H, "pairing");
  require_compatible(B, G, H, "pairing");
  return (G.inverse() * A.transpose() * H.matrix() * B).trace();
}

double det_directional_derivative(const LinMapMatrix& A, const LinMapMatrix& dA,
                                  const MetricMatrix& G, const MetricMatrix& H) {
  return pairing(intrinsic_cof(A, G, H), dA, G, H);
}

VolumeBoundSides volume_bound_sides(const LinMapMatrix& A, const MetricMatrix& G,
                                    const MetricMatrix& H) {
  const double det = intrinsic_det(A, G, H);
  const double dist = dist_to_so(A, G, H);
  return {std::abs(det - 1.0), std::pow(dist + 1.0, static_cast<double>(A.rows())) - 1.0};
}

}  // namespace rigidlab
