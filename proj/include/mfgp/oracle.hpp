#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "mfgp/adam.hpp"
#include "mfgp/density.hpp"
#include "mfgp/field.hpp"
#include "mfgp/lagrangian.hpp"
#include "mfgp/loss.hpp"
#include "mfgp/net.hpp"
#include "mfgp/supply.hpp"

namespace mfgp {

/// Price at interior time levels 0..n_t-1.
struct PricePath {
  std::vector<double> values;
};

// ---------------------------------------------------------------------------
// Linear-quadratic benchmark (L = v^2/2, no terminal cost). Every agent moves
// with velocity Q(t), so the density is m0 transported by X(t) = int_0^t Q and
// the potential is phi*(t, x) = M0(x - X(t)). The price is -Q.
// ---------------------------------------------------------------------------

/// phi* on the extended grid with X from the trapezoid rule on `path`.
/// Throws DomainViolation if the transported support leaves [x_lo, x_hi].
PotentialField analytic_potential_lq(const GridSpec& grid, const SupplyPath& path,
                                     const InitialDensity& density,
                                     const LagrangianModel& model = {});

PricePath analytic_price(const SupplyPath& path, const GridSpec& grid);

/// (1/2) int_0^T Q(t)^2 dt for the closed-form deterministic supply, by
/// composite Simpson with `intervals` panels. This is the continuum value
/// of the variational term at the benchmark solution.
double lq_objective_continuum(const SupplyParams& supply, double T, std::size_t intervals = 1 << 16);

// ---------------------------------------------------------------------------
// Recovery from a potential field.
// ---------------------------------------------------------------------------

enum class PriceRecovery {
  /// Mass-weighted average of w = dt/dx over points with dx >= threshold.
  weighted_velocity,
  /// Terminal condition at the last level, then backward integration of
  /// (H(x, -D_vL(x, -w)))_x + (D_vL(x, -w) + price)_t = 0.
  backward_integration,
};

/// Throws DegenerateDensity if some level has no point above the threshold.
PricePath extract_price(const PotentialField& field, double mass_threshold = 1e-3,
                        PriceRecovery mode = PriceRecovery::weighted_velocity,
                        const LagrangianModel& model = {});

/// u(t_k, x_i) = u_T(x_i) - sum_{k <= k' < n_t - 1} H(x_i, -D_vL(x_i, -w(k', i))) h_t,
/// on the interior grid. Where dx < threshold the level's mass-weighted
/// mean velocity stands in for w.
Array2 reconstruct_value_function(const PotentialField& field, const LagrangianModel& model = {},
                                  double mass_threshold = 1e-3);

// ---------------------------------------------------------------------------
// Direct minimization of the discrete objective over raw grid values.
// ---------------------------------------------------------------------------


struct TabularOptions {
  long steps = 40000;
  std::uint64_t seed = 0;  // recorded only; the solver is deterministic
  double learning_rate = 1e-4;
  LrSchedule schedule = LrSchedule::cosine;
  double min_learning_rate = 0.0;
  /// A total above this multiple of the initial total counts as divergence.
  double divergence_factor = 1e3;
};

struct TabularResult {
  PotentialField field;  // best-loss iterate
  LossBreakdown best;
  LossBreakdown initial;
  long best_step = 0;
};

/// Adam on phi values, started from phi(t, x) = M0(x) (constant in time).
/// Throws DivergenceError with the step index on a non-finite loss or one
/// that exceeds divergence_factor times the initial total.
TabularResult tabular_solve(const GridSpec& grid, const SupplyPath& path, const LossSetup& setup,
                            const TabularOptions& options = {});

// ---------------------------------------------------------------------------
// Test-set evaluation on fresh OU paths.
// ---------------------------------------------------------------------------

struct EvalReport {
  std::vector<double> errors;  // per-sample L-infinity price error (NaN on failure)
  double mean = 0.0;
  double stddev = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  LossBreakdown mean_loss;  // averaged over successful samples
};

/// Supply value a predicted price is compared against at level k: Q_k, or
/// (Q_k + Q_{k+1}) / 2 where forward differences place the velocity.
enum class PriceReference { grid, half_step };

struct EvalOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double mass_threshold = 1e-3;
  OuScheme scheme = OuScheme::euler;
  PriceReference reference = PriceReference::grid;
  unsigned threads = 0;  // 0 = hardware concurrency
};

using FieldProvider = std::function<PotentialField(const SupplyPath&)>;

/// For each sample: draw a path from the test stream, build the field,
/// extract the price, and take max_k |price_k + Q_ref(k)|. Samples whose density
/// degenerates are counted in `failures`.
EvalReport evaluate_stochastic(const FieldProvider& provider, const SupplyParams& supply,
                               const GridSpec& grid, const LossSetup& setup,
                               const EvalOptions& options);

EvalReport evaluate_stochastic(const NetParams& params, const SupplyParams& supply,
                               const GridSpec& grid, const LossSetup& setup,
                               const EvalOptions& options);

/// "t,price_predicted,price_analytic,abs_error" rows.
void write_price_csv(std::ostream& out, const GridSpec& grid, const PricePath& predicted,
                     const PricePath& analytic);

}  // namespace mfgp
