#include "rigidlab/functionals.hpp"

#include "rigidlab/cell_integration.hpp"

#include <algorithm>
#include <cmath>

namespace rigidlab {
namespace {

double dist_squared(const Mat& B) {
  const SignedSingularValues s = signed_singular_values(B);
  double sum = (s.signed_first - 1.0) * (s.signed_first - 1.0);
  for (Eigen::Index i = 1; i < s.sigma.size(); ++i) sum += (s.sigma(i) - 1.0) * (s.sigma(i) - 1.0);
  return sum;
}

EnergyReport make_report(std::string name, double p, const CellIntegrals& ci) {
  EnergyReport r;
  r.functional = std::move(name);
  r.p = p;
  r.energy = ci.total;
  r.clamped_points = ci.clamped_points;
  r.per_cell.resize(ci.value.size());
  for (std::size_t c = 0; c < ci.value.size(); ++c) {
    r.per_cell[c] = ci.volume[c] > 0.0 ? ci.value[c] / ci.volume[c] : 0.0;
  }
  return r;
}

void require_p(double p, double min) {
  if (!(p >= min) || !std::isfinite(p)) throw DomainError("exponent p out of range");
}

}  // namespace

double distortion_power(const Mat& B, double p) {
  const double d2 = dist_squared(B);
  if (p == 2.0) return d2;
  return std::pow(d2, 0.5 * p);
}

Mat distortion_power_gradient(const Mat& B, double p) {
  const NearestRotation nr = nearest_rotation(B);
  const auto d = B.rows();
  if (!nr.unique) {
    const double step = 1e-7 * std::max(1.0, B.norm());
    Mat grad(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        Mat Bp = B, Bm = B;
        Bp(i, j) += step;
        Bm(i, j) -= step;
        grad(i, j) = (distortion_power(Bp, p) - distortion_power(Bm, p)) / (2.0 * step);
      }
    }
    return grad;
  }
  const Mat diff = B - nr.rotation;
  if (p == 2.0) return 2.0 * diff;
  const double dist = std::sqrt(dist_squared(B));
  if (dist == 0.0) return Mat::Zero(d, d);
  return (p * std::pow(dist, p - 2.0)) * diff;
}

Mat spd_sqrt_derivative(const MetricMatrix& H, const Mat& dH) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H.matrix());
  const Vec root = es.eigenvalues().cwiseSqrt();
  const Mat& Q = es.eigenvectors();
  Mat X = Q.transpose() * dH * Q;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) /= root(i) + root(j);
  }
  return Q * X * Q.transpose();
}

EnergyReport elastic_energy(const DiscreteMap& f, const MetricField& g, const MetricField& h, double p,
                            const EvalOptions& opts) {
  require_p(p, 1.0);
  const CellIntegrals ci = integrate_cells(f, g, h, opts, [p](const QuadPointJet& jet) {
    return distortion_power(frame_reduce(jet.Df, jet.G, jet.Hf), p);
  });
  return make_report("elastic", p, ci);
}

EnergyReport metric_defect_energy(const DiscreteMap& f, const MetricField& g, const MetricField& h, double p,
                                  const EvalOptions& opts) {
  require_p(p, 1.0);
  const CellIntegrals ci = integrate_cells(f, g, h, opts, [p](const QuadPointJet& jet) {
    const Mat T = jet.G.matrix() - jet.Df.transpose() * jet.Hf.matrix() * jet.Df;
    const Mat GiT = jet.G.inverse() * T;
    const double norm2 = std::max(0.0, (GiT * GiT).trace());
    return p == 2.0 ? norm2 : std::pow(norm2, 0.5 * p);
  });
  return make_report("metric_defect", p, ci);
}

double jacobian_functional(const DiscreteMap& f, const MetricField& g, const MetricField& h,
                           const EvalOptions& opts) {
  return integrate_cells(f, g, h, opts, [](const QuadPointJet& jet) {
           return intrinsic_det(jet.Df, jet.G, jet.Hf);
         }).total;
}

VolumeBoundSides discrete_volume_bound(const DiscreteMap& f, const MetricField& g, const MetricField& h,
                                       const EvalOptions& opts) {
  const int d = f.dim();
  const CellIntegrals jac = integrate_cells(f, g, h, opts, [](const QuadPointJet& jet) {
    return intrinsic_det(jet.Df, jet.G, jet.Hf);
  });
  const CellIntegrals bound = integrate_cells(f, g, h, opts, [d](const QuadPointJet& jet) {
    return std::pow(pointwise_distortion(jet) + 1.0, d) - 1.0;
  });
  return {std::abs(jac.total - ordered_sum(jac.volume)), bound.total};
}

double det_deviation_norm(const DiscreteMap& f, const MetricField& g, const MetricField& h, double q,
                          const EvalOptions& opts) {
  require_p(q, 1.0);
  const double total = integrate_cells(f, g, h, opts, [q](const QuadPointJet& jet) {
                         const double dev = std::abs(intrinsic_det(jet.Df, jet.G, jet.Hf) - 1.0);
                         return q == 2.0 ? dev * dev : std::pow(dev, q);
                       }).total;
  return std::pow(std::max(total, 0.0), 1.0 / q);
}

namespace {

struct CellGradient {
  double energy = 0.0;
  std::uint32_t clamped = 0;
  std::uint32_t fallbacks = 0;
};

// Energy of one cell and dE/d(corner values), written to local[corner * d + alpha].
CellGradient cell_energy_gradient(const DiscreteMap& f, const MetricField& g, const MetricField& h, double p,
                                  const CellQuadrature& quad, std::size_t cell, ChartPolicy policy,
                                  double* local) {
  const int d = f.dim();
  const ChartGrid& grid = f.source();
  CellGradient out;
  std::fill(local, local + quad.corners() * d, 0.0);
  for (int q = 0; q < quad.size(); ++q) {
    const QuadPointJet jet = make_jet(f, g, h, cell, quad, q, policy);
    const Mat SH = spd_sqrt(jet.Hf).matrix();
    const Mat SGi = spd_inv_sqrt(jet.G);
    const Mat B = SH * jet.Df * SGi;
    out.energy += jet.weight * distortion_power(B, p);
    out.clamped += jet.clamped ? 1 : 0;
    if (!nearest_rotation(B).unique) ++out.fallbacks;
    const Mat M = jet.weight * distortion_power_gradient(B, p);
    const Mat dDf = SH * M * SGi;  // sqrt factors are symmetric
    Vec dy = Vec::Zero(d);
    if (!h.constant) {
      const MetricGradient dH = metric_gradient_at(h, jet.y);
      const Mat DfSGi = jet.Df * SGi;
      for (int gam = 0; gam < d; ++gam) {
        dy(gam) = (M.cwiseProduct(spd_sqrt_derivative(jet.Hf, dH.partial[gam]) * DfSGi)).sum();
      }
    }
    for (int a = 0; a < quad.corners(); ++a) {
      const double n = quad.shape(q, a);
      for (int alpha = 0; alpha < d; ++alpha) {
        double s = n * dy(alpha);
        for (int i = 0; i < d; ++i) s += dDf(alpha, i) * quad.shape_grad(q, a, i) / grid.spacing(i);
        local[a * d + alpha] += s;
      }
    }
  }
  return out;
}

}  // namespace

EnergyGradient energy_gradient(const DiscreteMap& f, const MetricField& g, const MetricField& h, double p,
                               const EvalOptions& opts) {
  if (!(p > 1.0)) throw DomainError("energy_gradient: p must exceed 1 (no subgradient for p = 1)");
  require_p(p, 1.0);
  const ChartGrid& grid = f.source();
  const int d = f.dim();
  const CellQuadrature quad(d, opts.rule);
  const int nc = quad.corners();
  const std::size_t cells = grid.cell_count();
  EnergyGradient out;
  out.gradient.assign(f.values().size(), 0.0);

  {
    const std::size_t stride = static_cast<std::size_t>(nc) * d;
    std::vector<double> local(cells * stride);
    std::vector<double> energy(cells);
    std::vector<CellGradient> stats(cells);
    for_each_index(cells, opts.exec, [&](std::size_t c) {
      stats[c] = cell_energy_gradient(f, g, h, p, quad, c, opts.policy, local.data() + c * stride);
      energy[c] = stats[c].energy;
    });
    out.energy = ordered_sum(energy);
    for (const auto& s : stats) {
      out.clamped_points += s.clamped;
      out.fd_fallbacks += s.fallbacks;
    }
    // gather: each node sums its (up to 2^d) incident cells in corner order
    for_each_index(grid.node_count(), opts.exec, [&](std::size_t node) {
      const MultiIndex ni = grid.node_multi_index(node);
      for (int a = 0; a < nc; ++a) {
        MultiIndex ci = ni;
        bool valid = true;
        for (int k = 0; k < d; ++k) {
          ci[k] -= (a >> k) & 1;
          valid = valid && ci[k] >= 0 && ci[k] < grid.cells(k);
        }
        if (!valid) continue;
        std::size_t cell = 0;
        for (int k = d - 1; k >= 0; --k) cell = cell * grid.cells(k) + ci[k];
        for (int k = 0; k < d; ++k) out.gradient[node * d + k] += local[cell * stride + a * d + k];
      }
    });
  }
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (f.constrained(n)) {
      for (int k = 0; k < d; ++k) out.gradient[n * d + k] = 0.0;
    }
  }
  return out;
}

double gradient_max_norm(const DiscreteMap& f, const std::vector<double>& gradient) {
  const int d = f.dim();
  double m = 0.0;
  for (std::size_t n = 0; n < f.node_count(); ++n) {
    if (f.constrained(n)) continue;
    for (int k = 0; k < d; ++k) m = std::max(m, std::abs(gradient[n * d + k]));
  }
  return m;
}

}  // namespace rigidlab
