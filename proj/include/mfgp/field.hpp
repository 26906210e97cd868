#pragma once

#include "mfgp/grid.hpp"

namespace mfgp {

/// Potential values on the extended grid together with their forward
/// differences on the interior grid:
///   dt(k, i) = (phi(k+1, i) - phi(k, i)) / h_t
///   dx(k, i) = (phi(k, i+1) - phi(k, i)) / h_x
/// dx is the density m and -dt the agent flux.
class PotentialField {
 public:
  PotentialField() = default;
  /// phi must be (n_t + 1) x (n_x + 1).
  PotentialField(const GridSpec& grid, Array2 phi);

  const GridSpec& grid() const noexcept { return grid_; }
  const Array2& phi() const noexcept { return phi_; }
  const Array2& dt() const noexcept { return dt_; }
  const Array2& dx() const noexcept { return dx_; }

 private:
  GridSpec grid_{};
  Array2 phi_;
  Array2 dt_;
  Array2 dx_;
};

}  // namespace mfgp
