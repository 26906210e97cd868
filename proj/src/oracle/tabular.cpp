#include <cmath>
#include <limits>
#include <string>

#include "mfgp/adam.hpp"
#include "mfgp/error.hpp"
#include "mfgp/oracle.hpp"

namespace mfgp {

TabularResult tabular_solve(const GridSpec& grid, const SupplyPath& path, const LossSetup& setup,
                            const TabularOptions& opt) {
  if (opt.steps < 1) throw ParameterError("tabular solve needs at least one step");
  if (grid.n_t > 64 || grid.n_x > 64) throw ParameterError("tabular solve is limited to 64x64 grids");
  if (!(opt.learning_rate > 0.0)) throw ParameterError("learning rate must be positive");
  if (!(opt.divergence_factor > 1.0)) throw ParameterError("divergence factor must exceed 1");

  Array2 phi(grid.ext_t(), grid.ext_x());
  for (std::size_t k = 0; k < grid.ext_t(); ++k) {
    for (std::size_t i = 0; i < grid.ext_x(); ++i) {
      phi(k, i) = initial_cumulative(setup.density, grid.space(i));
    }
  }

  AdamHyper hyper;
  hyper.learning_rate = opt.learning_rate;
  AdamState adam(hyper, phi.flat().size());

  TabularResult result;
  double best = std::numeric_limits<double>::infinity();
  for (long s = 0; s < opt.steps; ++s) {
    PotentialField field(grid, phi);
    const LossEvaluation ev = loss_with_gradient(field, path, setup);
    if (s == 0) result.initial = ev.terms;
    if (!std::isfinite(ev.terms.total) ||
        ev.terms.total > opt.divergence_factor * result.initial.total) {
      throw DivergenceError(s, "tabular solve diverged at step " + std::to_string(s) +
                                   " (total " + std::to_string(ev.terms.total) + ")");
    }
    if (ev.terms.total < best) {
      best = ev.terms.total;
      result.best = ev.terms;
      result.best_step = s;
      result.field = std::move(field);
    }
    adam.hyper.learning_rate =
        scheduled_rate(opt.schedule, opt.learning_rate, opt.min_learning_rate, s, opt.steps);
    adam_update(phi.flat(), ev.dphi.flat(), adam);
  }
  return result;
}

}  // namespace mfgp
