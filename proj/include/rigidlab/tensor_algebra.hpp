#pragma once

// Intrinsic linear algebra for linear maps A : (V, G) -> (W, H) between
// oriented inner-product spaces written in arbitrary (non-orthonormal) bases.
//
// Every operation takes the coordinate matrix A together with the Gram
// matrices G, H of the two inner products. In orthonormal bases (G = H = I)
// all of them reduce to their textbook matrix counterparts.

#include <Eigen/Dense>

#include <stdexcept>

namespace rigidlab {

inline constexpr int kMaxDim = 4;

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// Coordinate matrix of a linear map; row index is the target coordinate.
using LinMapMatrix = Mat;

/// Raised for inputs outside an operation's mathematical domain
/// (non-SPD metric, non-finite values, mismatched dimensions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Symmetric positive-definite Gram matrix of an inner product.
class MetricMatrix {
 public:
  /// Validates symmetry (1e-12 relative) and positive definiteness
  /// (smallest eigenvalue above 1e-12 * trace); throws DomainError otherwise.
  explicit MetricMatrix(const Mat& entries);

  /// Skips validation. For hot loops whose inputs were validated upstream.
  static MetricMatrix trusted(const Mat& entries);
  static MetricMatrix identity(int dim);

  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double det() const;
  Mat inverse() const;

 private:
  struct Unchecked {};
  MetricMatrix(const Mat& entries, Unchecked) : m_(entries) {}
  Mat m_;
};

/// Singular values in ascending order plus r_1 = sgn(det B) * sigma_1.
struct SignedSingularValues {
  Vec sigma;
  double signed_first = 0.0;
};

SignedSingularValues signed_singular_values(const Mat& B);

MetricMatrix spd_sqrt(const MetricMatrix& G);
Mat spd_inv_sqrt(const MetricMatrix& G);

/// Classical cofactor matrix (transpose of the adjugate): A (cof A)^t = det(A) I.
Mat matrix_cofactor(const Mat& A);

/// Adjoint of A with respect to G on the source and H on the target.
Mat intrinsic_transpose(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H);
double intrinsic_det(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H);
Mat intrinsic_cof(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H);

/// B = sqrt(H) A sqrt(G)^-1, the representation of A in orthonormal frames.
Mat frame_reduce(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H);

/// Euclidean distance of a square matrix from SO(d).
double dist_to_so_euclidean(const Mat& B);

/// Distance of A from SO(G, H) in the norm induced by G and H.
double dist_to_so(const LinMapMatrix& A, const MetricMatrix& G, const MetricMatrix& H);

/// A nearest rotation to B. Unique iff r_1 + sigma_2 > 0; `unique` reports
/// whether that margin exceeds `tol` times the largest singular value.
struct NearestRotation {
  Mat rotation;
  bool unique = true;
};
NearestRotation nearest_rotation(const Mat& B, double tol = 1e-8);

/// <A, B>_{G,H} = tr(G^-1 A^t H B).
double pairing(const LinMapMatrix& A, const LinMapMatrix& B, const MetricMatrix& G,
               const MetricMatrix& H);

/// d/dt Det(A + t dA) at t = 0 with the metrics frozen; equals <Cof A, dA>.
double det_directional_derivative(const LinMapMatrix& A, const LinMapMatrix& dA,
                                  const MetricMatrix& G, const MetricMatrix& H);

struct VolumeBoundSides {
  double lhs = 0.0;  ///< |Det A - 1|
  double rhs = 0.0;  ///< (dist(A, SO) + 1)^d - 1
};
VolumeBoundSides volume_bound_sides(const LinMapMatrix& A, const MetricMatrix& G,
                                    const MetricMatrix& H);

}  // namespace rigidlab
