#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mfgp/net.hpp"

namespace mfgp {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  bool operator==(const AdamHyper&) const = default;
};

struct AdamState {
  AdamHyper hyper;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;

  AdamState() = default;
  AdamState(const AdamHyper& h, std::size_t n)
      : hyper(h), first_moment(n, 0.0), second_moment(n, 0.0) {}
  bool operator==(const AdamState&) const = default;
};

enum class LrSchedule { constant, cosine };

/// Learning rate at 0-based `step` of `total`: `base` throughout, or a cosine
/// decay from `base` at step 0 toward `min_rate` at step `total`.
double scheduled_rate(LrSchedule schedule, double base, double min_rate, long step, long total);

/// One bias-corrected Adam update of `values` in place.
void adam_update(std::span<double> values, std::span<const double> grads, AdamState& state);

void adam_step(NetParams& params, const GradientAccumulator& grads, AdamState& state);

}  // namespace mfgp
