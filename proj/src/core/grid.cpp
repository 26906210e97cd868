#include "mfgp/grid.hpp"

#include <cmath>
#include <string>

#include "mfgp/error.hpp"

namespace mfgp {

GridSpec build_grid(double T, std::size_t n_t, double x_lo, double x_hi, std::size_t n_x) {
  if (n_t < 2 || n_x < 2) {
    throw ParameterError("grid needs at least 2 points per axis (got n_t=" +
                         std::to_string(n_t) + ", n_x=" + std::to_string(n_x) + ")");
  }
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("grid horizon T must be positive");
  if (!(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
    throw ParameterError("grid space interval is empty");
  }
  GridSpec g;
  g.t_lo = 0.0;
  g.t_hi = T;
  g.n_t = n_t;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.n_x = n_x;
  g.h_t = T / static_cast<double>(n_t - 1);
  g.h_x = (x_hi - x_lo) / static_cast<double>(n_x - 1);
  return g;
}

}  // namespace mfgp
