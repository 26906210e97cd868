#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "mfgp/adam.hpp"
#include "mfgp/checkpoint.hpp"
#include "mfgp/loss.hpp"
#include "mfgp/net.hpp"

namespace mfgp {

enum class TrainMode { deterministic, stochastic };

/// How deterministic mode builds its supply: the closed-form ODE solution or
/// the noise-free Euler recursion used by the stochastic sampler.
enum class DeterministicSupply { closed_form, euler };

struct TrainConfig {
  TrainMode mode = TrainMode::deterministic;
  long steps = 18000;
  std::uint64_t seed = 1;
  GridSpec grid = build_grid(1.0, 17, -1.0, 1.0, 31);
  SupplyParams supply;
  OuScheme scheme = OuScheme::euler;
  DeterministicSupply deterministic_supply = DeterministicSupply::closed_form;
  NetDims dims;
  AdamHyper adam;
  LrSchedule schedule = LrSchedule::constant;
  double min_learning_rate = 0.0;  // cosine floor
  LossSetup loss;
  std::size_t batch = 1;  // supply paths averaged per stochastic step
  long log_every = 100;
  long checkpoint_every = 0;  // 0 disables periodic checkpoints
  std::filesystem::path checkpoint_dir;
};

void validate(const TrainConfig& config);

struct HistoryRecord {
  long step = 0;  // 0-based index of the step; loss is the pre-update value
  LossBreakdown loss;
  double best_total = 0.0;  // minimum total over the records so far
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<HistoryRecord> records;
};

void write_history_csv(std::ostream& out, const TrainHistory& history);

/// Supply used for a training step. Deterministic mode ignores the index;
/// stochastic mode draws from the (seed, train stream, index) engine.
SupplyPath training_supply(const TrainConfig& config, std::uint64_t sample_index);

/// Stateful optimizer loop. Runs forward -> loss -> backward -> Adam per
/// step; the global step counter indexes the supply stream, so a trainer
/// restored from a checkpoint continues the exact same trajectory.
class Trainer {
 public:
  explicit Trainer(TrainConfig config);
  Trainer(TrainConfig config, Checkpoint resume);

  /// Executes one step and returns the loss evaluated before the update.
  LossBreakdown step();
  /// Runs until `config.steps` steps are done or `max_steps` more have run.
  void run(long max_steps = -1);

  long steps_done() const noexcept { return static_cast<long>(step_); }
  bool finished() const noexcept { return steps_done() >= config_.steps; }
  const NetParams& params() const noexcept { return params_; }
  const AdamState& adam() const noexcept { return adam_; }
  const TrainHistory& history() const noexcept { return history_; }
  const TrainConfig& config() const noexcept { return config_; }
  Checkpoint checkpoint() const;

 private:
  TrainConfig config_;
  NetParams params_;
  AdamState adam_;
  std::uint64_t step_ = 0;
  SupplyPath fixed_path_;
  TrainHistory history_;
  double best_ = 0.0;
  std::chrono::steady_clock::time_point start_;
};

struct TrainResult {
  NetParams params;
  AdamState adam;
  TrainHistory history;
};

TrainResult train_deterministic(const TrainConfig& config);
TrainResult train_stochastic(const TrainConfig& config);

}  // namespace mfgp
