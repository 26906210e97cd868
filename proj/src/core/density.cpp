#include "mfgp/density.hpp"

#include <cmath>

namespace mfgp {

double initial_density(const InitialDensity& d, double x) {
  const double u = (x - d.center) / d.half_width;
  if (std::abs(u) > 1.0) return 0.0;
  const double s = 1.0 - u * u;
  return 15.0 / (16.0 * d.half_width) * s * s;
}

double initial_cumulative(const InitialDensity& d, double x) {
  const double u = (x - d.center) / d.half_width;
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double u3 = u * u * u;
  return 0.5 + (15.0 / 16.0) * (u - 2.0 * u3 / 3.0 + u3 * u * u / 5.0);
}

}  // namespace mfgp
