#pragma once

// Shared helpers for the test binaries. Nothing here calls into the
// reverse-mode path; the finite-difference oracles only use forward
// evaluation.

#include <cmath>
#include <random>
#include <vector>

#include "mfgp/grid.hpp"
#include "mfgp/loss.hpp"
#include "mfgp/net.hpp"
#include "mfgp/supply.hpp"

namespace mfgp::test {

inline GridSpec bench_grid() { return build_grid(1.0, 17, -1.0, 1.0, 31); }

inline SupplyParams bench_supply() { return SupplyParams{2.0, 1.0, 0.0, -0.5}; }

/// Field with phi(k, i) = f(t_k, x_i) on the extended grid.
template <class F>
PotentialField field_from(const GridSpec& g, F&& f) {
  Array2 phi(g.ext_t(), g.ext_x());
  for (std::size_t k = 0; k < g.ext_t(); ++k)
    for (std::size_t i = 0; i < g.ext_x(); ++i) phi(k, i) = f(g.time(k), g.space(i));
  return PotentialField(g, std::move(phi));
}

inline double rel_err(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Central-difference gradient of loss_total(forward_field(params)) with
/// respect to every parameter.
inline std::vector<double> fd_param_gradient(NetParams params, const GridSpec& g,
                                             const SupplyPath& path, const LossSetup& setup,
                                             double step) {
  std::vector<double> out(params.flat().size());
  for (std::size_t q = 0; q < out.size(); ++q) {
    const double keep = params.flat()[q];
    params.flat()[q] = keep + step;
    const double up = loss_total(forward_field(params, g, path), path, setup).total;
    params.flat()[q] = keep - step;
    const double dn = loss_total(forward_field(params, g, path), path, setup).total;
    params.flat()[q] = keep;
    out[q] = (up - dn) / (2.0 * step);
  }
  return out;
}

}  // namespace mfgp::test
