#pragma once

// Quadrature over the cells of a discrete map's source grid.

#include "rigidlab/functionals.hpp"

#include <cstdint>
#include <type_traits>
#include <vector>

namespace rigidlab {

struct CellIntegrals {
  std::vector<double> value;   ///< integral of the integrand over each cell
  std::vector<double> volume;  ///< integral of dVol_g over each cell
  double total = 0.0;
  std::size_t clamped_points = 0;
};

/// Integrates integrand(jet) * jet.weight over every cell. The integrand may
/// also take (jet, cell, q) when it needs the quadrature location. Both
/// execution modes fill per-cell slots and reduce them in cell order with
/// compensated summation, so serial and parallel results are bitwise equal.
template <class Integrand>
CellIntegrals integrate_cells(const DiscreteMap& f, const MetricField& g, const MetricField& h,
                              const EvalOptions& opts, Integrand&& integrand) {
  const ChartGrid& grid = f.source();
  const CellQuadrature quad(grid.dim(), opts.rule);
  const std::size_t cells = grid.cell_count();
  auto eval = [&](const QuadPointJet& jet, std::size_t c, int q) -> double {
    if constexpr (std::is_invocable_v<Integrand&, const QuadPointJet&, std::size_t, int>) {
      return integrand(jet, c, q);
    } else {
      (void)c;
      (void)q;
      return integrand(jet);
    }
  };
  CellIntegrals out;
  out.value.assign(cells, 0.0);
  out.volume.assign(cells, 0.0);

  std::vector<std::uint32_t> clamped(cells, 0);
  for_each_index(cells, opts.exec, [&](std::size_t c) {
    double value = 0.0, volume = 0.0;
    std::uint32_t cl = 0;
    for (int q = 0; q < quad.size(); ++q) {
      const QuadPointJet jet = make_jet(f, g, h, c, quad, q, opts.policy);
      value += eval(jet, c, q) * jet.weight;
      volume += jet.weight;
      cl += jet.clamped ? 1 : 0;
    }
    out.value[c] = value;
    out.volume[c] = volume;
    clamped[c] = cl;
  });
  out.total = ordered_sum(out.value);
  for (auto c : clamped) out.clamped_points += c;
  return out;
}

}  // namespace rigidlab
