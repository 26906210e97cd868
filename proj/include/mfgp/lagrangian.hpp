#pragma once

#include <functional>

namespace mfgp {

enum class LagrangianKind { LQ };

/// Running cost L(x, v) and its Legendre dual H(x, p) = sup_v [-p v - L(x, v)].
/// The terminal cost u_T and its slope u_T' default to zero.
struct LagrangianModel {
  LagrangianKind kind = LagrangianKind::LQ;
  std::function<double(double)> terminal_cost;        // empty => 0
  std::function<double(double)> terminal_cost_slope;  // empty => 0

  bool has_terminal_cost() const { return static_cast<bool>(terminal_cost_slope) ||
                                          static_cast<bool>(terminal_cost); }
  double u_T(double x) const { return terminal_cost ? terminal_cost(x) : 0.0; }
  double u_T_slope(double x) const { return terminal_cost_slope ? terminal_cost_slope(x) : 0.0; }
};

double lagrangian(const LagrangianModel& model, double x, double v);
double hamiltonian(const LagrangianModel& model, double x, double p);
/// D_v L(x, v).
double lagrangian_dv(const LagrangianModel& model, double x, double v);

/// Perspective function F(x, j, m) = L(x, j/m) m, evaluated with m replaced
/// by max(m, eps). For LQ this is j^2 / (2 max(m, eps)); finite and
/// nonnegative for any real m.
double perspective(const LagrangianModel& model, double x, double j, double m, double eps);

struct PerspectiveGrad {
  double d_flux;
  double d_mass;
};

/// Partial derivatives of perspective() in (j, m). The mass derivative is
/// zero on the clamped branch m <= eps.
PerspectiveGrad perspective_grad(const LagrangianModel& model, double x, double j, double m,
                                 double eps);

}  // namespace mfgp
