#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "mfgp/error.hpp"
#include "mfgp/oracle.hpp"

namespace mfgp {
namespace {

struct SampleOutcome {
  double error = std::numeric_limits<double>::quiet_NaN();
  LossBreakdown loss;
  bool ok = false;
};

SampleOutcome run_sample(const FieldProvider& provider, const SupplyParams& supply,
                         const GridSpec& grid, const LossSetup& setup, const EvalOptions& opt,
                         std::size_t index) {
  auto rng = seeded_engine(opt.seed, kTestStream, index);
  const SupplyPath path = sample_ou_path(supply, grid, rng, opt.scheme);
  const PotentialField field = provider(path);
  SampleOutcome out;
  out.loss = loss_total(field, path, setup);
  try {
    const PricePath predicted = extract_price(field, opt.mass_threshold);
    double err = 0.0;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
      const double q = opt.reference == PriceReference::grid
                           ? path.values[k]
                           : 0.5 * (path.values[k] + path.values[k + 1]);
      err = std::max(err, std::abs(predicted.values[k] + q));
    }
    out.error = err;
    out.ok = true;
  } catch (const DegenerateDensity&) {
  }
  return out;
}

}  // namespace

EvalReport evaluate_stochastic(const FieldProvider& provider, const SupplyParams& supply,
                               const GridSpec& grid, const LossSetup& setup,
                               const EvalOptions& opt) {
  if (opt.samples == 0) throw ParameterError("evaluation needs at least one sample");
  validate(supply);

  std::vector<SampleOutcome> outcomes(opt.samples);
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, opt.samples));
  if (threads <= 1) {
    for (std::size_t s = 0; s < opt.samples; ++s) {
      outcomes[s] = run_sample(provider, supply, grid, setup, opt, s);
    }
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < opt.samples; s += threads) {
          outcomes[s] = run_sample(provider, supply, grid, setup, opt, s);
        }
      });
    }
  }

  EvalReport r;
  r.count = opt.samples;
  r.seed = opt.seed;
  r.errors.reserve(opt.samples);
  double sum = 0.0;
  std::size_t ok = 0;
  for (const auto& o : outcomes) {
    r.errors.push_back(o.error);
    if (!o.ok) {
      ++r.failures;
      continue;
    }
    ++ok;
    sum += o.error;
    r.max = std::max(r.max, o.error);
    r.mean_loss.l_v += o.loss.l_v;
    r.mean_loss.l_0 += o.loss.l_0;
    r.mean_loss.l_b += o.loss.l_b;
    r.mean_loss.l_m0 += o.loss.l_m0;
    r.mean_loss.l_p += o.loss.l_p;
    r.mean_loss.total += o.loss.total;
  }
  if (ok > 0) {
    const double n = static_cast<double>(ok);
    r.mean = sum / n;
    double var = 0.0;
    for (const auto& o : outcomes) {
      if (o.ok) var += (o.error - r.mean) * (o.error - r.mean);
    }
    r.stddev = ok > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    r.mean_loss.l_v /= n;
    r.mean_loss.l_0 /= n;
    r.mean_loss.l_b /= n;
    r.mean_loss.l_m0 /= n;
    r.mean_loss.l_p /= n;
    r.mean_loss.total /= n;
  } else {
    r.mean = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

EvalReport evaluate_stochastic(const NetParams& params, const SupplyParams& supply,
                               const GridSpec& grid, const LossSetup& setup,
                               const EvalOptions& opt) {
  return evaluate_stochastic(
      [&params, &grid](const SupplyPath& path) { return forward_field(params, grid, path); },
      supply, grid, setup, opt);
}

}  // namespace mfgp
