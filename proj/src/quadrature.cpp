#include "rigidlab/quadrature.hpp"

#include <cmath>

namespace rigidlab {

CellQuadrature::CellQuadrature(int dim, QuadratureRule rule) : dim_(dim) {
  if (rule.order != 1 && rule.order != 2) throw DomainError("quadrature order must be 1 or 2");
  if (rule.subdivisions < 1) throw DomainError("quadrature subdivisions must be >= 1");
  std::vector<double> nodes1d, weights1d;
  const double sub = 1.0 / rule.subdivisions;
  const double off = 0.5 / std::sqrt(3.0);
  for (int s = 0; s < rule.subdivisions; ++s) {
    if (rule.order == 1) {
      nodes1d.push_back((s + 0.5) * sub);
      weights1d.push_back(sub);
    } else {
      nodes1d.push_back((s + 0.5 - off) * sub);
      nodes1d.push_back((s + 0.5 + off) * sub);
      weights1d.push_back(0.5 * sub);
      weights1d.push_back(0.5 * sub);
    }
  }
  const int n1 = static_cast<int>(nodes1d.size());
  int total = 1;
  for (int k = 0; k < dim; ++k) total *= n1;
  const int nc = corners();
  shape_.resize(static_cast<std::size_t>(total) * nc);
  grad_.resize(static_cast<std::size_t>(total) * nc * dim);
  for (int q = 0; q < total; ++q) {
    Vec xi(dim);
    double w = 1.0;
    for (int k = 0, rest = q; k < dim; ++k, rest /= n1) {
      xi(k) = nodes1d[rest % n1];
      w *= weights1d[rest % n1];
    }
    points_.push_back(xi);
    weights_.push_back(w);
    shape_at(dim, xi, &shape_[static_cast<std::size_t>(q) * nc], &grad_[static_cast<std::size_t>(q) * nc * dim]);
  }
}

void CellQuadrature::shape_at(int dim, const Vec& xi, double* values, double* grads) {
  const int nc = 1 << dim;
  for (int a = 0; a < nc; ++a) {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= ((a >> k) & 1) ? xi(k) : 1.0 - xi(k);
    values[a] = v;
    if (grads == nullptr) continue;
    for (int k = 0; k < dim; ++k) {
      double g = ((a >> k) & 1) ? 1.0 : -1.0;
      for (int m = 0; m < dim; ++m) {
        if (m != k) g *= ((a >> m) & 1) ? xi(m) : 1.0 - xi(m);
      }
      grads[a * dim + k] = g;
    }
  }
}

}  // namespace rigidlab
