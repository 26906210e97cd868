#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "mfgp/grid.hpp"

namespace mfgp {

/// Mean-reverting supply dQ = theta (q_bar - Q) dt + sigma dW with Q(0) = q0.
struct SupplyParams {
  double theta = 2.0;
  double q_bar = 1.0;
  double sigma = 0.0;
  double q0 = -0.5;
};

void validate(const SupplyParams& params);

/// Q at every level of the extended time axis (n_t + 1 values).
struct SupplyPath {
  std::vector<double> values;
};

enum class OuScheme { euler, exact };

/// Closed-form solution of the noise-free ODE on the extended time axis.
SupplyPath deterministic_supply(const SupplyParams& params, const GridSpec& grid);

/// One Ornstein-Uhlenbeck realization. The driving normals are drawn in
/// level order, one per step, so a prefix of the path depends only on the
/// corresponding prefix of the random stream.
SupplyPath sample_ou_path(const SupplyParams& params, const GridSpec& grid, std::mt19937_64& rng,
                          OuScheme scheme = OuScheme::euler);

/// Engine for the sample with the given index in a named stream. Distinct
/// (stream, index) pairs never share state, so training steps and test
/// samples can be regenerated independently.
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

inline constexpr std::uint64_t kTrainStream = 0x7261696eULL;
inline constexpr std::uint64_t kTestStream = 0x74657374ULL;

/// Trapezoid approximation of the integral of Q over [0, t_k], k = 0..n_t-1.
double cumulative_supply(const SupplyPath& path, const GridSpec& grid, std::size_t k);

/// Trapezoid cumulative integral at every extended level.
std::vector<double> cumulative_supply_levels(const SupplyPath& path, const GridSpec& grid);

/// Writes "t,Q" rows for every extended level.
void write_supply_csv(std::ostream& out, const SupplyPath& path, const GridSpec& grid);

}  // namespace mfgp
