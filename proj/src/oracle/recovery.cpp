#include <cmath>
#include <string>

#include "mfgp/error.hpp"
#include "mfgp/oracle.hpp"

namespace mfgp {
namespace {

// Mass-weighted mean of w = dt/dx at level k over points with dx >= threshold.
double level_velocity(const PotentialField& f, std::size_t k, double threshold) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < f.grid().n_x; ++i) {
    const double m = f.dx()(k, i);
    if (m >= threshold) {
      num += (f.dt()(k, i) / m) * m;
      den += m;
    }
  }
  if (den <= 0.0) {
    throw DegenerateDensity(k, "no grid point at level " + std::to_string(k) +
                                   " carries mass above the threshold");
  }
  return num / den;
}

PricePath backward_price(const PotentialField& f, double threshold, const LagrangianModel& model) {
  const GridSpec& g = f.grid();
  const std::size_t last = g.n_t - 1;
  PricePath p;
  p.values.assign(g.n_t, 0.0);

  // Terminal condition: -D_vL(x, -w) - price(T) = u_T'(x), averaged over mass.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < g.n_x; ++i) {
    const double m = f.dx()(last, i);
    if (m < threshold) continue;
    const double x = g.space(i);
    const double w = f.dt()(last, i) / m;
    num += (-lagrangian_dv(model, x, -w) - model.u_T_slope(x)) * m;
    den += m;
  }
  if (den <= 0.0) throw DegenerateDensity(last, "terminal level has no mass above the threshold");
  p.values[last] = num / den;

  // price_t = -(H(x, -D_vL(x,-w)))_x - (D_vL(x,-w))_t, averaged over mass.
  for (std::size_t k = last; k-- > 0;) {
    double acc = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < g.n_x; ++i) {
      const double m0 = f.dx()(k, i);
      const double m1 = f.dx()(k, i + 1);
      const double mk = f.dx()(k + 1, i);
      if (m0 < threshold || m1 < threshold || mk < threshold) continue;
      const double x = g.space(i);
      const double w0 = f.dt()(k, i) / m0;
      const double w1 = f.dt()(k, i + 1) / m1;
      const double wk = f.dt()(k + 1, i) / mk;
      const double h0 = hamiltonian(model, x, -lagrangian_dv(model, x, -w0));
      const double h1 = hamiltonian(model, g.space(i + 1), -lagrangian_dv(model, g.space(i + 1), -w1));
      const double dv_t = (lagrangian_dv(model, x, -wk) - lagrangian_dv(model, x, -w0)) / g.h_t;
      acc += (-(h1 - h0) / g.h_x - dv_t) * m0;
      mass += m0;
    }
    if (mass <= 0.0) throw DegenerateDensity(k, "level " + std::to_string(k) + " has no interior mass");
    p.values[k] = p.values[k + 1] - g.h_t * acc / mass;
  }
  return p;
}

}  // namespace

PricePath extract_price(const PotentialField& field, double threshold, PriceRecovery mode,
                        const LagrangianModel& model) {
  if (!(threshold > 0.0)) throw ParameterError("mass threshold must be positive");
  if (mode == PriceRecovery::backward_integration) return backward_price(field, threshold, model);
  PricePath p;
  p.values.resize(field.grid().n_t);
  for (std::size_t k = 0; k < field.grid().n_t; ++k) p.values[k] = level_velocity(field, k, threshold);
  return p;
}

Array2 reconstruct_value_function(const PotentialField& f, const LagrangianModel& model,
                                  double threshold) {
  if (!(threshold > 0.0)) throw ParameterError("mass threshold must be positive");
  const GridSpec& g = f.grid();
  Array2 w(g.n_t, g.n_x);
  for (std::size_t k = 0; k < g.n_t; ++k) {
    const double mean = level_velocity(f, k, threshold);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double m = f.dx()(k, i);
      w(k, i) = m >= threshold ? f.dt()(k, i) / m : mean;
    }
  }
  Array2 u(g.n_t, g.n_x);
  const std::size_t last = g.n_t - 1;
  for (std::size_t i = 0; i < g.n_x; ++i) u(last, i) = model.u_T(g.space(i));
  for (std::size_t k = last; k-- > 0;) {
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double x = g.space(i);
      const double p = -lagrangian_dv(model, x, -w(k, i));
      u(k, i) = u(k + 1, i) - g.h_t * hamiltonian(model, x, p);
    }
  }
  return u;
}

}  // namespace mfgp
