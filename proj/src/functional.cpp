#include "etalab/functional.hpp"

#include <limits>
#include <numbers>

#include "etalab/gamma.hpp"

namespace etalab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

Complex pow2(Complex z) { return std::exp(z * kLn2); }

}  // namespace

FunctionalRatio big_p(const StripPoint& s) {
  if (!s.in_critical_strip()) {
    throw Error(ErrorCode::InvalidArgument, "P(s) is defined on the critical strip");
  }
  const Complex z = s.value();
  const Complex two_power = (1.0 - pow2(z)) / (1.0 - pow2(1.0 - z));
  const Complex log_exp = std::log(2.0) - z * std::log(2.0 * std::numbers::pi);
  const Complex log_cos = log_cos_half_pi(z);
  const Complex log_g = log_gamma(z);

  FunctionalRatio p;
  p.factor_two_power = two_power;
  p.factor_exp = std::exp(log_exp);
  p.factor_cos = std::exp(log_cos);
  p.factor_gamma = std::exp(log_g);
  const Complex log_rest = log_exp + log_cos + log_g;
  p.value = two_power * std::exp(log_rest);
  p.log_modulus = std::log(std::abs(two_power)) + log_rest.real();
  return p;
}

double critical_line_identity_check(double t) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "critical-line check requires t > 0");
  }
  return std::abs(std::expm1(big_p(StripPoint(0.5, t)).log_modulus));
}

ConjectureBounds conjecture_bounds(double alpha, double t) {
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1/2)");
  }
  if (!(t > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "t must be > 0");
  }
  const double upper = std::pow(8.0 * std::numbers::pi / (9.0 * t), alpha);
  return {alpha, t, (1.0 - 2.0 * alpha) / (1.0 + 2.0 * alpha) * upper, upper,
          t >= kConjectureMinT};
}

std::pair<double, double> approx_sides(ApproxKind kind, double sigma) {
  const double four_ninths = std::pow(4.0 / 9.0, 0.5 - sigma);
  const double p = std::exp2(sigma);
  const double q = std::exp2(1.0 - sigma);
  if (kind == ApproxKind::Upper) {
    return {(1.0 + p) / (1.0 + q), four_ninths};
  }
  // (1 - 2^s)/(1 - 2^(1-s)) with both factors written via expm1 for small s.
  const double exact = std::expm1(sigma * kLn2) / std::expm1((1.0 - sigma) * kLn2);
  return {sigma / (1.0 - sigma) * four_ninths, exact};
}

ApproxDeviationReport approx_deviation_scan(ApproxKind kind, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1e-4)) {
    throw Error(ErrorCode::InvalidArgument, "grid_step must lie in (0, 1e-4]");
  }
  ApproxDeviationReport report;
  report.kind = kind;
  report.grid_step = grid_step;
  const auto steps = static_cast<std::size_t>(std::ceil(0.5 / grid_step - 1e-9));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double sigma = std::min(0.5, static_cast<double>(k) * grid_step);
    const auto [lhs, rhs] = approx_sides(kind, sigma);
    const double deviation = rhs - lhs;
    // Equality holds at the ends, so allow a few ulps there.
    if (deviation < -8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(rhs))) {
      ++report.direction_violations;
    }
    const double abs_dev = std::abs(deviation);
    if (abs_dev > report.max_deviation) {
      report.max_deviation = abs_dev;
      report.sigma_at_max = sigma;
    }
    if (k == 0) {
      report.deviation_at_zero = abs_dev;
    }
    if (k == steps) {
      report.deviation_at_half = abs_dev;
    }
    ++report.points;
  }
  return report;
}

double two_power_modulus_ratio(double alpha, double t) {
  const Complex num = 1.0 - pow2(Complex{0.5 - alpha, t});
  const Complex den = 1.0 - pow2(Complex{0.5 + alpha, -t});
  return std::abs(num) / std::abs(den);
}

double zeta_modulus_ratio(double alpha, double t) {
  const OracleValue left = zeta(StripPoint(0.5 - alpha, t));
  const OracleValue right = zeta(StripPoint(0.5 + alpha, t));
  if (right.zero_indistinguishable()) {
    throw Error(ErrorCode::ZeroDenominator, "zeta(1/2 + alpha + i t) is indistinguishable from 0");
  }
  return std::abs(left.value) / std::abs(right.value);
}

double sz_relation_check(double alpha, double t) {
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1/2)");
  }
  const OracleValue eta_right = eta(StripPoint(0.5 + alpha, t));
  const OracleValue eta_left = eta(StripPoint(0.5 - alpha, t));
  if (eta_left.zero_indistinguishable()) {
    throw Error(ErrorCode::ZeroDenominator, "eta(1/2 - alpha + i t) is indistinguishable from 0");
  }
  const double lhs = std::abs(eta_right.value) / std::abs(eta_left.value);
  const double rhs = two_power_modulus_ratio(alpha, t) / zeta_modulus_ratio(alpha, t);
  return std::abs(lhs - rhs);
}

double two_power_alpha_derivative(double alpha, double t, double step) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1/2]");
  }
  if (!(step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  }
  return (two_power_modulus_ratio(alpha + step, t) - two_power_modulus_ratio(alpha - step, t)) /
         (2.0 * step);
}

}  // namespace etalab
