#include "mfgp/training.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "mfgp/error.hpp"
#include "mfgp/format.hpp"

namespace mfgp {

void validate(const TrainConfig& c) {
  if (c.steps < 1) throw ParameterError("steps must be at least 1");
  if (c.log_every < 1) throw ParameterError("log_every must be at least 1");
  if (c.checkpoint_every < 0) throw ParameterError("checkpoint_every must be nonnegative");
  if (c.batch < 1) throw ParameterError("batch must be at least 1");
  if (c.grid.n_t < 2 || c.grid.n_x < 2 || !(c.grid.h_t > 0.0) || !(c.grid.h_x > 0.0)) {
    throw ParameterError("invalid grid");
  }
  validate(c.supply);
  if (c.mode == TrainMode::stochastic && !(c.supply.sigma >= 0.0)) {
    throw ParameterError("stochastic mode needs sigma >= 0");
  }
  if (!(c.loss.eps > 0.0)) throw ParameterError("loss eps must be positive");
  if (!(c.loss.density.half_width > 0.0)) throw ParameterError("density half_width must be positive");
  if (!(c.adam.learning_rate > 0.0) || !(c.adam.beta1 >= 0.0 && c.adam.beta1 < 1.0) ||
      !(c.adam.beta2 >= 0.0 && c.adam.beta2 < 1.0) || !(c.adam.eps > 0.0)) {
    throw ParameterError("invalid Adam hyperparameters");
  if (!(c.min_learning_rate >= 0.0)) throw ParameterError("min learning rate must be nonnegative");
  }
  if (c.dims.d_h == 0 || c.dims.d_1 == 0 || c.dims.d_2 == 0) {
    throw ParameterError("network widths must be at least 1");
  }
}

SupplyPath training_supply(const TrainConfig& c, std::uint64_t sample_index) {
  if (c.mode == TrainMode::deterministic) {
    if (c.deterministic_supply == DeterministicSupply::closed_form) {
      return deterministic_supply(c.supply, c.grid);
    }
    SupplyParams quiet = c.supply;
    quiet.sigma = 0.0;
    auto rng = seeded_engine(c.seed, kTrainStream, 0);
    return sample_ou_path(quiet, c.grid, rng, OuScheme::euler);
  }
  auto rng = seeded_engine(c.seed, kTrainStream, sample_index);
  return sample_ou_path(c.supply, c.grid, rng, c.scheme);
}

Trainer::Trainer(TrainConfig config)
    : config_(std::move(config)),
      params_(init_params(config_.dims, config_.seed)),
      adam_(config_.adam, parameter_count(config_.dims)),
      start_(std::chrono::steady_clock::now()) {
  validate(config_);
  if (config_.mode == TrainMode::deterministic) fixed_path_ = training_supply(config_, 0);
  best_ = std::numeric_limits<double>::infinity();
}

Trainer::Trainer(TrainConfig config, Checkpoint resume)
    : config_(std::move(config)),
      params_(std::move(resume.params)),
      adam_(std::move(resume.adam)),
      step_(resume.step),
      start_(std::chrono::steady_clock::now()) {
  validate(config_);
  if (!(params_.dims() == config_.dims)) {
    throw ParameterError("checkpoint network dimensions differ from the configuration");
  }
  if (config_.mode == TrainMode::deterministic) fixed_path_ = training_supply(config_, 0);
  best_ = std::numeric_limits<double>::infinity();
}

LossBreakdown Trainer::step() {
  const long j = static_cast<long>(step_);
  LossBreakdown loss;
  GradientAccumulator grads(config_.dims);

  if (config_.mode == TrainMode::deterministic) {
    const ForwardRecord rec = record_forward(params_, config_.grid, fixed_path_);
    const LossEvaluation ev = loss_with_gradient(rec.field, fixed_path_, config_.loss);
    loss = ev.terms;
    if (!std::isfinite(loss.total)) throw DivergenceError(j, "non-finite loss at step " + std::to_string(j));
    grads = backward(params_, rec, ev.dphi);
  } else {
    const std::size_t b = config_.batch;
    const double inv = 1.0 / static_cast<double>(b);
    for (std::size_t s = 0; s < b; ++s) {
      const SupplyPath path = training_supply(config_, step_ * b + s);
      const ForwardRecord rec = record_forward(params_, config_.grid, path);
      const LossEvaluation ev = loss_with_gradient(rec.field, path, config_.loss);
      if (!std::isfinite(ev.terms.total)) {
        throw DivergenceError(j, "non-finite loss at step " + std::to_string(j));
      }
      const GradientAccumulator g = backward(params_, rec, ev.dphi);
      if (b == 1) {
        loss = ev.terms;
        grads = g;
      } else {
        for (std::size_t q = 0; q < grads.flat().size(); ++q) grads.flat()[q] += inv * g.flat()[q];
        loss.l_v += inv * ev.terms.l_v;
        loss.l_0 += inv * ev.terms.l_0;
        loss.l_b += inv * ev.terms.l_b;
        loss.l_m0 += inv * ev.terms.l_m0;
        loss.l_p += inv * ev.terms.l_p;
        loss.total += inv * ev.terms.total;
      }
    }
  }

  adam_.hyper.learning_rate = scheduled_rate(config_.schedule, config_.adam.learning_rate,
                                             config_.min_learning_rate, j, config_.steps);
  adam_step(params_, grads, adam_);
  ++step_;

  if (j % config_.log_every == 0 || j == config_.steps - 1) {
    best_ = std::min(best_, loss.total);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    history_.records.push_back({j, loss, best_, secs});
  }
  if (config_.checkpoint_every > 0 && !config_.checkpoint_dir.empty() &&
      static_cast<long>(step_) % config_.checkpoint_every == 0) {
    std::filesystem::create_directories(config_.checkpoint_dir);
    save_checkpoint(config_.checkpoint_dir / ("step_" + std::to_string(step_) + ".ckpt"),
                    checkpoint());
  }
  return loss;
}

void Trainer::run(long max_steps) {
  long n = 0;
  while (!finished() && (max_steps < 0 || n < max_steps)) {
    step();
    ++n;
  }
}

Checkpoint Trainer::checkpoint() const { return Checkpoint{params_, adam_, step_}; }

TrainResult train_deterministic(const TrainConfig& config) {
  if (config.mode != TrainMode::deterministic) throw ParameterError("config mode is not deterministic");
  Trainer t(config);
  t.run();
  return {t.params(), t.adam(), t.history()};
}

TrainResult train_stochastic(const TrainConfig& config) {
  if (config.mode != TrainMode::stochastic) throw ParameterError("config mode is not stochastic");
  Trainer t(config);
  t.run();
  return {t.params(), t.adam(), t.history()};
}

void write_history_csv(std::ostream& out, const TrainHistory& h) {
  write_loss_csv_header(out);
  out << ",seconds\n";
  for (const auto& r : h.records) {
    write_loss_csv_row(out, r.step, r.loss);
    out << ',' << fmt9(r.seconds) << '\n';
  }
}

}  // namespace mfgp
