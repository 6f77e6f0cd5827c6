#include "rigidlab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace rigidlab {

OptMethod parse_opt_method(const std::string& name) {
  if (name == "lbfgs") return OptMethod::lbfgs;
  if (name == "gradient_descent" || name == "gd") return OptMethod::gradient_descent;
  throw std::invalid_argument("unknown optimizer method '" + name + "'");
}

std::string to_string(OptMethod m) { return m == OptMethod::lbfgs ? "lbfgs" : "gradient_descent"; }

void OptimizerConfig::validate() const {
  if (memory < 1) throw std::invalid_argument("optimizer: memory must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("optimizer: max_iters must be >= 0");
  if (!(grad_tol > 0.0) || !(energy_tol > 0.0)) throw std::invalid_argument("optimizer: tolerances must be > 0");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw std::invalid_argument("optimizer: armijo_c must lie in (0,1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("optimizer: shrink must lie in (0,1)");
  if (max_trials < 1) throw std::invalid_argument("optimizer: max_trials must be >= 1");
}

bool OptimizationTrace::monotone() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].energy <= rows[i - 1].energy)) return false;
  }
  return true;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

std::vector<double> lbfgs_direction(const std::vector<double>& g, const std::deque<Pair>& mem) {
  std::vector<double> q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * dot(mem[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * mem[k].y[i];
  }
  if (!mem.empty()) {
    const Pair& last = mem.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * dot(mem[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * mem[k].s[i];
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

MinimizeResult minimize(const DiscreteMap& f0, const MetricField& g, const MetricField& h, double p,
                        const OptimizerConfig& cfg) {
  cfg.validate();
  if (!(p > 1.0)) throw DomainError("minimize: p must exceed 1");
  DiscreteMap f = f0;
  OptimizationTrace trace;

  EnergyGradient cur = energy_gradient(f, g, h, p, cfg.eval);
  double gnorm = gradient_max_norm(f, cur.gradient);
  trace.rows.push_back({0, cur.energy, gnorm, 0.0, cur.clamped_points});

  std::deque<Pair> mem;
  double min_spacing = f.source().spacing(0);
  for (int k = 1; k < f.dim(); ++k) min_spacing = std::min(min_spacing, f.source().spacing(k));
  double gd_step = -1.0;  // first gradient step moves the largest entry by a tenth of a cell

  while (true) {
    if (gnorm <= cfg.grad_tol) {
      trace.reason = "converged";
      break;
    }
    if (trace.iterations >= cfg.max_iters) {
      trace.reason = "max_iters";
      break;
    }
    std::vector<double> dir;
    double step0 = 1.0;
    if (cfg.method == OptMethod::lbfgs) {
      dir = lbfgs_direction(cur.gradient, mem);
      if (!(dot(dir, cur.gradient) < 0.0)) {
        mem.clear();
        dir = lbfgs_direction(cur.gradient, mem);
      }
      if (mem.empty()) step0 = 0.1 * min_spacing / max_abs(dir);
    } else {
      dir = cur.gradient;
      for (double& v : dir) v = -v;
      if (gd_step < 0.0) gd_step = 0.1 * min_spacing / max_abs(dir);
      step0 = gd_step;
    }
    const double slope = dot(dir, cur.gradient);

    // Armijo backtracking
    DiscreteMap trial = f;
    EnergyGradient next;
    double step = step0;
    bool accepted = false;
    for (int t = 0; t < cfg.max_trials; ++t, step *= cfg.shrink) {
      auto tv = trial.values();
      const auto fv = f.values();
      for (std::size_t i = 0; i < tv.size(); ++i) tv[i] = fv[i] + step * dir[i];
      try {
        next = energy_gradient(trial, g, h, p, cfg.eval);
      } catch (const ChartError&) {
        continue;
      }
      if (std::isfinite(next.energy) && next.energy <= cur.energy + cfg.armijo_c * step * slope &&
          next.energy < cur.energy) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      trace.reason = "stalled";
      break;
    }

    std::vector<double> s(dir.size()), y(dir.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = step * dir[i];
      y[i] = next.gradient[i] - cur.gradient[i];
    }
    const double sy = dot(s, y);
    if (cfg.method == OptMethod::lbfgs && sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      mem.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(mem.size()) > cfg.memory) mem.pop_front();
    }
    if (cfg.method == OptMethod::gradient_descent) gd_step = 2.0 * step;

    const double old_energy = cur.energy;
    f = std::move(trial);
    cur = std::move(next);
    gnorm = gradient_max_norm(f, cur.gradient);
    ++trace.iterations;
    trace.rows.push_back({trace.iterations, cur.energy, gnorm, step, cur.clamped_points});
    if (!(cur.energy < old_energy)) throw std::logic_error("minimize: accepted step did not decrease the energy");

    if (gnorm <= cfg.grad_tol) {
      trace.reason = "converged";
      break;
    }
    if (old_energy - cur.energy <= cfg.energy_tol * std::max(std::abs(old_energy),
                                                             std::numeric_limits<double>::min())) {
      trace.reason = "energy_tol";
      break;
    }
  }
  return {std::move(f), std::move(trace)};
}

}  // namespace rigidlab
