#pragma once

#include "rigidlab/kernels.hpp"
#include "rigidlab/map_fields.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rigidlab {

struct EvalOptions {
  QuadratureRule rule{};
  ChartPolicy policy = ChartPolicy::strict;
  Exec exec = Exec::parallel;
};

struct EnergyReport {
  std::string functional;
  double energy = 0.0;
  double p = 2.0;
  /// Mean integrand over each cell (energy density w.r.t. dVol_g).
  std::vector<double> per_cell;
  std::optional<double> grad_norm;
  std::size_t clamped_points = 0;
};

/// dist^p(B, SO(d)) for a frame-reduced B. p == 2 skips the square root.
double distortion_power(const Mat& B, double p);

/// d dist^p / dB = p dist^(p-2) (B - R) with R the nearest rotation. Where the
/// nearest rotation is not unique the derivative falls back to central
/// differences of distortion_power.
Mat distortion_power_gradient(const Mat& B, double p);

/// Derivative of sqrt(H) in direction dH (solves S X + X S = dH).
Mat spd_sqrt_derivative(const MetricMatrix& H, const Mat& dH);

/// Integral of dist^p(df, SO(g, f*h)) dVol_g.
EnergyReport elastic_energy(const DiscreteMap& f, const MetricField& g, const MetricField& h, double p,
                            const EvalOptions& opts = {});

/// Integral of |g - f*h|_g^p dVol_g with |T|^2 = g^ik g^jl T_ij T_kl.
EnergyReport metric_defect_energy(const DiscreteMap& f, const MetricField& g, const MetricField& h, double p,
                                  const EvalOptions& opts = {});

/// Integral of Det df dVol_g.
double jacobian_functional(const DiscreteMap& f, const MetricField& g, const MetricField& h,
                           const EvalOptions& opts = {});

/// Discrete volume-distortion bound: lhs = |int Det df dVol_g - Vol_g|,
/// rhs = int ((dist + 1)^d - 1) dVol_g.
VolumeBoundSides discrete_volume_bound(const DiscreteMap& f, const MetricField& g, const MetricField& h,
                                       const EvalOptions& opts = {});

/// (int |Det df - 1|^q dVol_g)^(1/q).
double det_deviation_norm(const DiscreteMap& f, const MetricField& g, const MetricField& h, double q,
                          const EvalOptions& opts = {});

struct EnergyGradient {
  double energy = 0.0;
  /// dE / d(nodal value), node-major like DiscreteMap::values; zero on constrained nodes.
  std::vector<double> gradient;
  std::size_t clamped_points = 0;
  /// Quadrature points whose nearest rotation was not unique.
  std::size_t fd_fallbacks = 0;
};

/// Elastic energy and its exact discrete gradient. Requires p > 1.
EnergyGradient energy_gradient(const DiscreteMap& f, const MetricField& g, const MetricField& h, double p,
                               const EvalOptions& opts = {});

/// Max-norm over unconstrained entries.
double gradient_max_norm(const DiscreteMap& f, const std::vector<double>& gradient);

}  // namespace rigidlab
