#pragma once

// Tensor-product Gauss rules on the unit cell [0,1]^d, optionally applied on
// a uniform subdivision of the cell, together with multilinear shape data.

#include "rigidlab/tensor_algebra.hpp"

#include <vector>

namespace rigidlab {

struct QuadratureRule {
  int order = 2;         ///< Gauss-Legendre points per axis: 1 or 2
  int subdivisions = 1;  ///< sub-cells per axis within each grid cell
};

class CellQuadrature {
 public:
  CellQuadrature(int dim, QuadratureRule rule);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(weights_.size()); }
  int corners() const { return 1 << dim_; }

  /// Local coordinates in [0,1]^d.
  const Vec& point(int q) const { return points_[q]; }
  /// Weights sum to one over the cell.
  double weight(int q) const { return weights_[q]; }
  /// Multilinear shape value of corner a at point q.
  double shape(int q, int a) const { return shape_[q * corners() + a]; }
  /// d/dxi_k of corner a's shape function at q (reference cell).
  double shape_grad(int q, int a, int k) const { return grad_[(q * corners() + a) * dim_ + k]; }

  static void shape_at(int dim, const Vec& xi, double* values, double* grads);

 private:
  int dim_;
  std::vector<Vec> points_;
  std::vector<double> weights_, shape_, grad_;
};

}  // namespace rigidlab
