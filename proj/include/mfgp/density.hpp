#pragma once

namespace mfgp {

/// Quartic bump m0(x) = 15/(16 r) (1 - ((x - c)/r)^2)^2 on [c - r, c + r].
struct InitialDensity {
  double center = -0.2;
  double half_width = 0.5;
};

double initial_density(const InitialDensity& density, double x);

/// M0(x) = integral of m0 up to x; closed form in u = clamp((x - c)/r, -1, 1).
double initial_cumulative(const InitialDensity& density, double x);

}  // namespace mfgp
