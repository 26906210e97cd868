#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mfgp/oracle.hpp"
#include "mfgp/training.hpp"

namespace mfgp {

struct ExportToggles {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

/// Everything a CLI run needs. Defaults reproduce the benchmark setup:
/// 17 x 31 grid on [0,1] x [-1,1], theta = 2, q_bar = 1, Q(0) = -0.5,
/// hidden width 32, Adam 1e-3, 18000 steps.
struct RunConfig {
  TrainConfig train;
  EvalOptions eval;
  TabularOptions tabular;
  std::filesystem::path out_dir;
  ExportToggles exports;
  bool eval_seed_explicit = false;  // false: eval.seed follows the run seed
};

/// Parses the sectioned key = value format:
///
///   [run]     mode, steps, seed, log_every, checkpoint_every, batch, out, export
///   [grid]    T, n_t, x_lo, x_hi, n_x
///   [supply]  theta, q_bar, sigma, q0, scheme, deterministic
///   [density] center, half_width
///   [net]     d_h, d_1, d_2
///   [adam]    lr, beta1, beta2, eps, schedule, min_lr
///   [loss]    eps, w_v, w_0, w_b, w_m0, w_p
///   [eval]    samples, seed, mass_threshold, reference
///   [tabular] steps, lr, min_lr, schedule
///
/// Unknown sections or keys and malformed values throw ParameterError.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

ExportToggles parse_exports(std::string_view list);
TrainMode parse_mode(std::string_view s);

/// Fully resolved configuration in the same format, one key per line.
std::string canonical_config(const RunConfig& config);
/// FNV-1a of canonical_config, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Validates cross-field constraints (grid, supply, network, optimizer).
void validate(const RunConfig& config);

}  // namespace mfgp
