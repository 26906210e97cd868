#include "mfgp/lagrangian.hpp"

#include <algorithm>

namespace mfgp {

double lagrangian(const LagrangianModel&, double, double v) { return 0.5 * v * v; }

double hamiltonian(const LagrangianModel&, double, double p) { return 0.5 * p * p; }

double lagrangian_dv(const LagrangianModel&, double, double v) { return v; }

double perspective(const LagrangianModel&, double, double j, double m, double eps) {
  return j * j / (2.0 * std::max(m, eps));
}

PerspectiveGrad perspective_grad(const LagrangianModel&, double, double j, double m,
                                 double eps) {
  if (m > eps) return {j / m, -j * j / (2.0 * m * m)};
  return {j / eps, 0.0};
}

}  // namespace mfgp
