#pragma once

#include "etalab/orbit.hpp"

namespace etalab {

/// An exact disk-geometry quantity next to its leading-order expansion.
struct AsymptoticRecord {
  Index n = 0;
  double exact = 0.0;
  double leading = 0.0;
  double ratio = 0.0;  // exact / leading
};

/// Delta_r^2 - Delta_c^2 against sigma^2 / (n (n+1)) / ((n+1)^sigma (n+2)^sigma).
/// Meaningful past n_o(s); below angle_threshold(t) throws AngleTooLarge.
AsymptoticRecord check_dr2_minus_dc2(Index n, const StripPoint& s);

/// (eps Delta_r)^2 - Delta_c^2 against eps^2 sigma^2 / (n (n+1)) / (n+2)^(2 sigma).
/// Requires 0 < eps <= 1.
AsymptoticRecord check_eps_radius(Index n, const StripPoint& s, double eps);

/// check_eps_radius at eps = 1/2, the half-radius disks.
AsymptoticRecord check_half_radius(Index n, const StripPoint& s);

}  // namespace etalab
