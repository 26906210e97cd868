#include "mfgp/supply.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "mfgp/error.hpp"
#include "mfgp/format.hpp"

namespace mfgp {

void validate(const SupplyParams& p) {
  if (!(p.theta > 0.0)) throw ParameterError("supply theta must be positive");
  if (!(p.sigma >= 0.0)) throw ParameterError("supply sigma must be nonnegative");
  if (!std::isfinite(p.q_bar) || !std::isfinite(p.q0)) {
    throw ParameterError("supply levels must be finite");
  }
}

SupplyPath deterministic_supply(const SupplyParams& p, const GridSpec& grid) {
  validate(p);
  SupplyPath path;
  path.values.resize(grid.ext_t());
  for (std::size_t k = 0; k < grid.ext_t(); ++k) {
    path.values[k] = p.q_bar + (p.q0 - p.q_bar) * std::exp(-p.theta * grid.time(k));
  }
  return path;
}

SupplyPath sample_ou_path(const SupplyParams& p, const GridSpec& grid, std::mt19937_64& rng,
                          OuScheme scheme) {
  validate(p);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double h = grid.h_t;
  const double decay = std::exp(-p.theta * h);
  const double exact_sd = p.sigma * std::sqrt((1.0 - std::exp(-2.0 * p.theta * h)) / (2.0 * p.theta));
  const double euler_sd = p.sigma * std::sqrt(h);

  SupplyPath path;
  path.values.resize(grid.ext_t());
  path.values[0] = p.q0;
  for (std::size_t k = 0; k + 1 < grid.ext_t(); ++k) {
    const double q = path.values[k];
    const double xi = normal(rng);
    if (scheme == OuScheme::euler) {
      path.values[k + 1] = q + p.theta * (p.q_bar - q) * h + euler_sd * xi;
    } else {
      path.values[k + 1] = p.q_bar + (q - p.q_bar) * decay + exact_sd * xi;
    }
  }
  return path;
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> cumulative_supply_levels(const SupplyPath& path, const GridSpec& grid) {
  if (path.values.size() != grid.ext_t()) {
    throw ParameterError("supply path length " + std::to_string(path.values.size()) +
                         " does not match extended time axis " + std::to_string(grid.ext_t()));
  }
  std::vector<double> out(grid.ext_t(), 0.0);
  for (std::size_t k = 1; k < grid.ext_t(); ++k) {
    out[k] = out[k - 1] + 0.5 * grid.h_t * (path.values[k - 1] + path.values[k]);
  }
  return out;
}

double cumulative_supply(const SupplyPath& path, const GridSpec& grid, std::size_t k) {
  if (k >= grid.n_t) {
    throw ParameterError("time level " + std::to_string(k) + " outside [0, " +
                         std::to_string(grid.n_t - 1) + "]");
  }
  return cumulative_supply_levels(path, grid)[k];
}

void write_supply_csv(std::ostream& out, const SupplyPath& path, const GridSpec& grid) {
  out << "t,Q\n";
  for (std::size_t k = 0; k < path.values.size(); ++k) {
    out << fmt9(grid.time(k)) << ',' << fmt9(path.values[k]) << '\n';
  }
}

}  // namespace mfgp
