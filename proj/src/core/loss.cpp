#include "mfgp/loss.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "mfgp/error.hpp"
#include "mfgp/format.hpp"

namespace mfgp {
namespace {

void check_path(const PotentialField& field, const SupplyPath& path) {
  if (path.values.size() != field.grid().ext_t()) {
    throw ParameterError("supply path has " + std::to_string(path.values.size()) +
                         " levels, field grid has " + std::to_string(field.grid().ext_t()));
  }
}

double weighted_total(const LossBreakdown& l, const LossWeights& w) {
  double t = w.v * l.l_v;
  t += w.zero * l.l_0;
  t += w.balance * l.l_b;
  t += w.initial * l.l_m0;
  t += w.probability * l.l_p;
  return t;
}

}  // namespace

double loss_variational(const PotentialField& field, const LagrangianModel& model, double eps) {
  const GridSpec& g = field.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.n_t; ++k) {
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double x = g.space(i);
      const double dt = field.dt()(k, i);
      sum += perspective(model, x, -dt, field.dx()(k, i), eps) - model.u_T_slope(x) * dt;
    }
  }
  return g.h_x * g.h_t * sum;
}

double loss_positivity(const PotentialField& field) {
  const GridSpec& g = field.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.n_t; ++k) {
    for (std::size_t i = 0; i < g.n_x; ++i) sum += std::max(-field.dx()(k, i), 0.0);
  }
  return sum;
}

double loss_balance(const PotentialField& field, const SupplyPath& path) {
  check_path(field, path);
  const GridSpec& g = field.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.n_t; ++k) {
    double flux = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) flux += field.dt()(k, i);
    const double r = g.h_x * flux + path.values[k];
    sum += r * r;
  }
  return sum;
}

double loss_initial(const PotentialField& field, const InitialDensity& density) {
  const GridSpec& g = field.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_x; ++i) {
    const double r = field.phi()(0, i) - initial_cumulative(density, g.space(i));
    sum += r * r;
  }
  return sum;
}

double loss_probability(const PotentialField& field) {
  const GridSpec& g = field.grid();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.n_t; ++k) {
    double mass = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) mass += field.dx()(k, i);
    const double r = 1.0 - g.h_x * mass;
    sum += r * r;
  }
  return sum;
}

LossBreakdown loss_total(const PotentialField& field, const SupplyPath& path,
                         const LossSetup& setup) {
  LossBreakdown l;
  l.l_v = loss_variational(field, setup.model, setup.eps);
  l.l_0 = loss_positivity(field);
  l.l_b = loss_balance(field, path);
  l.l_m0 = loss_initial(field, setup.density);
  l.l_p = loss_probability(field);
  l.total = weighted_total(l, setup.weights);
  return l;
}

LossEvaluation loss_with_gradient(const PotentialField& field, const SupplyPath& path,
                                  const LossSetup& setup) {
  LossEvaluation out;
  out.terms = loss_total(field, path, setup);

  const GridSpec& g = field.grid();
  const LossWeights& w = setup.weights;
  const Array2& dt = field.dt();
  const Array2& dx = field.dx();
  Array2 g_dt(g.n_t, g.n_x);
  Array2 g_dx(g.n_t, g.n_x);
  const double cell = g.h_x * g.h_t;

  for (std::size_t k = 0; k < g.n_t; ++k) {
    double flux = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
      flux += dt(k, i);
      mass += dx(k, i);
    }
    const double balance_r = g.h_x * flux + path.values[k];
    const double mass_r = 1.0 - g.h_x * mass;
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double x = g.space(i);
      const PerspectiveGrad pg = perspective_grad(setup.model, x, -dt(k, i), dx(k, i), setup.eps);
      g_dt(k, i) = w.v * cell * (-pg.d_flux - setup.model.u_T_slope(x)) +
                   w.balance * 2.0 * balance_r * g.h_x;
      g_dx(k, i) = w.v * cell * pg.d_mass - w.probability * 2.0 * mass_r * g.h_x;
      if (dx(k, i) < 0.0) g_dx(k, i) -= w.zero;
    }
  }

  out.dphi = Array2(g.ext_t(), g.ext_x());
  Array2& d = out.dphi;
  for (std::size_t k = 0; k < g.n_t; ++k) {
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double a = g_dt(k, i) / g.h_t;
      d(k + 1, i) += a;
      d(k, i) -= a;
      const double b = g_dx(k, i) / g.h_x;
      d(k, i + 1) += b;
      d(k, i) -= b;
    }
  }
  for (std::size_t i = 0; i < g.n_x; ++i) {
    d(0, i) += w.initial * 2.0 * (field.phi()(0, i) - initial_cumulative(setup.density, g.space(i)));
  }
  return out;
}

void write_loss_csv_header(std::ostream& out) { out << "step,l_v,l_0,l_b,l_m0,l_p,total"; }

void write_loss_csv_row(std::ostream& out, long step, const LossBreakdown& l) {
  out << step << ',' << fmt9(l.l_v) << ',' << fmt9(l.l_0) << ',' << fmt9(l.l_b) << ','
      << fmt9(l.l_m0) << ',' << fmt9(l.l_p) << ',' << fmt9(l.total);
}

}  // namespace mfgp
