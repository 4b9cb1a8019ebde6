#pragma once

#include <numbers>
#include <utility>

#include "etalab/oracle.hpp"

namespace etalab {

/// P(s) = (1 - 2^s) / (1 - 2^(1-s)) * 2 (2 pi)^(-s) * cos(pi s / 2) * Gamma(s),
/// the factor with eta(1 - s) = P(s) eta(s).
struct FunctionalRatio {
  Complex value{};
  Complex factor_two_power{};
  Complex factor_exp{};
  Complex factor_cos{};
  Complex factor_gamma{};
  double log_modulus = 0.0;  // log |P(s)|, finite even where the factors are not
};

/// Requires 0 < sigma < 1. The product is formed in log space.
FunctionalRatio big_p(const StripPoint& s);

/// | |P(1/2 + i t)| - 1 |. Requires t > 0.
double critical_line_identity_check(double t);

/// Closed-form bounds (1 - 2a)/(1 + 2a) (8 pi / 9t)^a and (8 pi / 9t)^a for
/// the modulus ratio |eta(1/2 + a + i t) / eta(1/2 - a + i t)|.
struct ConjectureBounds {
  double alpha = 0.0;
  double t = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool in_stated_range = false;  // t >= 2 pi + 1
};

inline constexpr double kConjectureMinT = 2.0 * std::numbers::pi + 1.0;

/// Requires alpha in [0, 1/2) and t > 0. Below 2 pi + 1 the bounds are
/// still computed but flagged as outside the stated range.
ConjectureBounds conjecture_bounds(double alpha, double t);

enum class ApproxKind {
  Upper,  // (1 + 2^s)/(1 + 2^(1-s)) <= (4/9)^(1/2 - s)
  Lower,  // s/(1 - s) (4/9)^(1/2 - s) <= (1 - 2^s)/(1 - 2^(1-s))
};

struct ApproxDeviationReport {
  ApproxKind kind = ApproxKind::Upper;
  double grid_step = 0.0;
  std::size_t points = 0;
  double max_deviation = 0.0;
  double sigma_at_max = 0.0;
  double deviation_at_zero = 0.0;
  double deviation_at_half = 0.0;
  std::size_t direction_violations = 0;
};

/// Scans sigma over [0, 1/2] with the given step (<= 1e-4).
ApproxDeviationReport approx_deviation_scan(ApproxKind kind, double grid_step = 1e-4);

/// Left and right sides of the elementary approximation at sigma.
std::pair<double, double> approx_sides(ApproxKind kind, double sigma);

/// | |1 - 2^(1/2 - a + i t)| / |1 - 2^(1/2 + a - i t)| |, the two-power factor
/// of the eta ratio expressed in alpha.
double two_power_modulus_ratio(double alpha, double t);

/// a(alpha, t) = |zeta(1/2 - alpha + i t)| / |zeta(1/2 + alpha + i t)|.
double zeta_modulus_ratio(double alpha, double t);

/// Absolute difference between |eta(1/2+a+it)| / |eta(1/2-a+it)| and
/// two_power_modulus_ratio / a(alpha, t). Throws ZeroDenominator when
/// eta(1/2 - a + i t) or zeta(1/2 + a + i t) is zero-indistinguishable.
double sz_relation_check(double alpha, double t);

/// Central difference (step 1e-6) of two_power_modulus_ratio in alpha.
/// Requires alpha in [0, 1/2].
double two_power_alpha_derivative(double alpha, double t, double step = 1e-6);

}  // namespace etalab
