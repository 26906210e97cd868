#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mfgp/error.hpp"
#include "mfgp/format.hpp"
#include "mfgp/oracle.hpp"

namespace mfgp {

PotentialField analytic_potential_lq(const GridSpec& grid, const SupplyPath& path,
                                     const InitialDensity& density, const LagrangianModel& model) {
  if (model.kind != LagrangianKind::LQ || model.has_terminal_cost()) {
    throw ParameterError("closed-form benchmark needs the LQ model without terminal cost");
  }
  const std::vector<double> shift = cumulative_supply_levels(path, grid);
  const auto [lo, hi] = std::minmax_element(shift.begin(), shift.end());
  const double left = density.center - density.half_width + *lo;
  const double right = density.center + density.half_width + *hi;
  if (left < grid.x_lo || right > grid.x_hi) {
    throw DomainViolation("transported support [" + fmt9(left) + ", " + fmt9(right) +
                          "] leaves [" + fmt9(grid.x_lo) + ", " + fmt9(grid.x_hi) + "]");
  }
  Array2 phi(grid.ext_t(), grid.ext_x());
  for (std::size_t k = 0; k < grid.ext_t(); ++k) {
    for (std::size_t i = 0; i < grid.ext_x(); ++i) {
      phi(k, i) = initial_cumulative(density, grid.space(i) - shift[k]);
    }
  }
  return PotentialField(grid, std::move(phi));
}

PricePath analytic_price(const SupplyPath& path, const GridSpec& grid) {
  if (path.values.size() < grid.n_t) throw ParameterError("supply path shorter than the grid");
  PricePath p;
  p.values.resize(grid.n_t);
  for (std::size_t k = 0; k < grid.n_t; ++k) p.values[k] = -path.values[k];
  return p;
}

double lq_objective_continuum(const SupplyParams& s, double T, std::size_t intervals) {
  if (intervals < 2 || intervals % 2 != 0) throw ParameterError("Simpson needs an even panel count");
  auto half_q2 = [&](double t) {
    const double q = s.q_bar + (s.q0 - s.q_bar) * std::exp(-s.theta * t);
    return 0.5 * q * q;
  };
  const double h = T / static_cast<double>(intervals);
  double sum = half_q2(0.0) + half_q2(T);
  for (std::size_t n = 1; n < intervals; ++n) {
    sum += (n % 2 ? 4.0 : 2.0) * half_q2(h * static_cast<double>(n));
  }
  return sum * h / 3.0;
}

void write_price_csv(std::ostream& out, const GridSpec& grid, const PricePath& predicted,
                     const PricePath& analytic) {
  out << "t,price_predicted,price_analytic,abs_error\n";
  const std::size_t n = std::min(predicted.values.size(), analytic.values.size());
  for (std::size_t k = 0; k < n; ++k) {
    out << fmt9(grid.time(k)) << ',' << fmt9(predicted.values[k]) << ','
        << fmt9(analytic.values[k]) << ','
        << fmt9(std::abs(predicted.values[k] - analytic.values[k])) << '\n';
  }
}

}  // namespace mfgp
