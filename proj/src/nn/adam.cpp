#include "mfgp/adam.hpp"

#include <cmath>
#include <numbers>

#include "mfgp/error.hpp"

namespace mfgp {

double scheduled_rate(LrSchedule schedule, double base, double min_rate, long step, long total) {
  if (schedule == LrSchedule::constant || total <= 0) return base;
  const double frac = static_cast<double>(step) / static_cast<double>(total);
  return min_rate + 0.5 * (base - min_rate) * (1.0 + std::cos(std::numbers::pi * frac));
}

void adam_update(std::span<double> values, std::span<const double> grads, AdamState& s) {
  if (grads.size() != values.size() || s.first_moment.size() != values.size() ||
      s.second_moment.size() != values.size()) {
    throw ParameterError("Adam state, gradient, and parameter sizes differ");
  }
  ++s.step_count;
  const AdamHyper& h = s.hyper;
  const double n = static_cast<double>(s.step_count);
  const double c1 = 1.0 - std::pow(h.beta1, n);
  const double c2 = 1.0 - std::pow(h.beta2, n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double g = grads[i];
    double& m = s.first_moment[i];
    double& v = s.second_moment[i];
    m = h.beta1 * m + (1.0 - h.beta1) * g;
    v = h.beta2 * v + (1.0 - h.beta2) * g * g;
    values[i] -= h.learning_rate * (m / c1) / (std::sqrt(v / c2) + h.eps);
  }
}

void adam_step(NetParams& params, const GradientAccumulator& grads, AdamState& state) {
  if (!(params.dims() == grads.dims())) throw ParameterError("gradient shape mismatch");
  adam_update(params.flat(), grads.flat(), state);
}

}  // namespace mfgp
