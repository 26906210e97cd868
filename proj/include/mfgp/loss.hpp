#pragma once

#include <iosfwd>

#include "mfgp/density.hpp"
#include "mfgp/field.hpp"
#include "mfgp/lagrangian.hpp"
#include "mfgp/supply.hpp"

namespace mfgp {

/// Multipliers of the five terms in the total. All ones reproduces the
/// unweighted objective.
struct LossWeights {
  double v = 1.0;
  double zero = 1.0;
  double balance = 1.0;
  double initial = 1.0;
  double probability = 1.0;
  bool operator==(const LossWeights&) const = default;
};

struct LossBreakdown {
  double l_v = 0.0;
  double l_0 = 0.0;
  double l_b = 0.0;
  double l_m0 = 0.0;
  double l_p = 0.0;
  double total = 0.0;
  bool operator==(const LossBreakdown&) const = default;
};

struct LossSetup {
  LagrangianModel model;
  InitialDensity density;
  double eps = 1e-6;
  LossWeights weights;
};

// Every sum runs over the interior grid, k-major then i.

/// h_x h_t sum F(x_i, -dt, dx) - u_T'(x_i) dt
double loss_variational(const PotentialField& field, const LagrangianModel& model, double eps);
/// sum max(-dx, 0)
double loss_positivity(const PotentialField& field);
/// sum_k (h_x sum_i dt + Q_k)^2
double loss_balance(const PotentialField& field, const SupplyPath& path);
/// sum_i (phi(0, x_i) - M0(x_i))^2
double loss_initial(const PotentialField& field, const InitialDensity& density);
/// sum_k (1 - h_x sum_i dx)^2
double loss_probability(const PotentialField& field);

LossBreakdown loss_total(const PotentialField& field, const SupplyPath& path,
                         const LossSetup& setup);

struct LossEvaluation {
  LossBreakdown terms;
  Array2 dphi;  // d(total)/d(phi) on the extended grid
};

LossEvaluation loss_with_gradient(const PotentialField& field, const SupplyPath& path,
                                  const LossSetup& setup);

void write_loss_csv_header(std::ostream& out);
void write_loss_csv_row(std::ostream& out, long step, const LossBreakdown& l);

}  // namespace mfgp
