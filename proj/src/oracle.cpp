#include "etalab/oracle.hpp"

#include <limits>
#include <numbers>

#include "etalab/gamma.hpp"

namespace etalab {

namespace {

using Real = long double;
using ComplexL = std::complex<Real>;

const double kLogAccelerationBase = std::log(3.0 + std::sqrt(8.0));
constexpr double kDoubleUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

struct AcceleratedSum {
  ComplexL value;
  Real rounding_bound;
};

// Algorithm 1 of Cohen, Rodriguez Villegas and Zagier for
// sum_{k>=0} (-1)^k (k+1)^(-s), with t >= 0.
AcceleratedSum accelerate(Real sigma, Real abs_t, Index terms) {
  const Real n = static_cast<Real>(terms);
  Real d = std::pow(3.0L + std::sqrt(8.0L), n);
  d = (d + 1.0L / d) / 2.0L;
  Real b = -1.0L;
  Real c = -d;
  ComplexL sum{0.0L, 0.0L};
  Real weighted_magnitude = 0.0L;
  for (Index k = 0; k < terms; ++k) {
    const Real kk = static_cast<Real>(k);
    c = b - c;
    const Real log_k = std::log(kk + 1.0L);
    const Real magnitude = std::exp(-sigma * log_k);
    const Real phase = abs_t * log_k;
    sum += c * ComplexL{magnitude * std::cos(phase), -magnitude * std::sin(phase)};
    // Phase error scales with the size of the reduced argument.
    weighted_magnitude += std::abs(c) * magnitude * (abs_t * log_k + 4.0L * kk + 16.0L);
    b = (kk + n) * (kk - n) * b / ((kk + 0.5L) * (kk + 1.0L));
  }
  const Real eps = std::numeric_limits<Real>::epsilon();
  return {sum / d, eps * weighted_magnitude / d};
}

double log_truncation_factor(const StripPoint& s) {
  // log( Gamma(sigma) / |Gamma(sigma + i t)| )
  const double log_abs_gamma_s = log_gamma(Complex{s.sigma(), std::abs(s.t())}).real();
  return std::lgamma(s.sigma()) - log_abs_gamma_s;
}

void check_target(double target_error) {
  if (!(target_error >= kOracleErrorFloor)) {
    throw Error(ErrorCode::InvalidArgument, "target_error must be >= 1e-13");
  }
}

}  // namespace

double acceleration_truncation_bound(const StripPoint& s, Index terms) {
  return std::exp(std::log(2.0) - static_cast<double>(terms) * kLogAccelerationBase +
                  log_truncation_factor(s));
}

Index oracle_term_count(const StripPoint& s, double target_error, const OracleOptions& options) {
  check_target(target_error);
  const double digits = -std::log10(target_error);
  const double heuristic = std::ceil(1.31 * digits + 0.9 * std::abs(s.t()));
  // Half the budget goes to truncation, half to rounding.
  const double analytic = std::ceil(
      (std::log(2.0) + log_truncation_factor(s) - std::log(target_error / 2.0)) /
      kLogAccelerationBase);
  const double terms = std::max({heuristic, analytic, 1.0});
  if (terms + static_cast<double>(options.certificate_extra_terms) >
      static_cast<double>(options.max_terms)) {
    throw Error(ErrorCode::AccuracyUnreachable,
                "eta needs more than max_terms accelerated terms at this t");
  }
  return static_cast<Index>(terms);
}

OracleValue eta(const StripPoint& s, double target_error, const OracleOptions& options) {
  const Index terms = oracle_term_count(s, target_error, options);
  const Index certified_terms = terms + options.certificate_extra_terms;
  const Real sigma = s.sigma();
  const Real abs_t = std::abs(static_cast<Real>(s.t()));

  const AcceleratedSum coarse = accelerate(sigma, abs_t, terms);
  const AcceleratedSum fine = accelerate(sigma, abs_t, certified_terms);

  Complex value{static_cast<double>(fine.value.real()), static_cast<double>(fine.value.imag())};
  const double cast_error = 2.0 * kDoubleUnitRoundoff * std::abs(value);
  double bound = acceleration_truncation_bound(s, certified_terms) +
                 static_cast<double>(fine.rounding_bound) + cast_error;

  // Empirical certificate: the two runs must agree within their combined bounds.
  const double disagreement = static_cast<double>(std::abs(fine.value - coarse.value));
  const double allowed = acceleration_truncation_bound(s, terms) + bound +
                         static_cast<double>(coarse.rounding_bound);
  if (disagreement > allowed) {
    bound = std::max(bound, disagreement);
  }
  if (!(bound <= target_error) || !std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorCode::AccuracyUnreachable, "cannot certify eta at the requested error");
  }
  if (s.t() < 0.0) {
    value = std::conj(value);
  }
  return {value, bound, certified_terms};
}

OracleValue zeta(const StripPoint& s, double target_error, const OracleOptions& options) {
  const double pole_spacing = 2.0 * std::numbers::pi / std::numbers::ln2;
  const double nearest_k = std::round(s.t() / pole_spacing);
  const Complex nearest_pole{1.0, nearest_k * pole_spacing};
  if (std::abs(s.value() - nearest_pole) < 1e-9) {
    throw Error(ErrorCode::DenominatorPole, "1 - 2^(1-s) vanishes at this point");
  }
  // Leave room for the amplification by 1 / |1 - 2^(1-s)|.
  const Complex two_power = std::exp((1.0 - s.value()) * std::numbers::ln2);
  const Complex denominator = 1.0 - two_power;
  const double den_abs = std::abs(denominator);
  const double eta_target = std::max(kOracleErrorFloor, target_error * std::min(1.0, den_abs) / 2.0);
  const OracleValue e = eta(s, eta_target, options);
  const Complex value = e.value / denominator;
  const double den_error = 8.0 * kDoubleUnitRoundoff * (1.0 + std::abs(two_power)) *
                           (1.0 + std::abs(s.value()));
  const double bound = e.abs_error_bound / den_abs + std::abs(value) * den_error / den_abs +
                       4.0 * kDoubleUnitRoundoff * std::abs(value);
  if (!(bound <= target_error)) {
    throw Error(ErrorCode::AccuracyUnreachable, "cannot certify zeta at the requested error");
  }
  return {value, bound, e.terms};
}

double partial_sum_rounding_bound(Index n, const StripPoint& s) {
  if (n == 0) {
    return 0.0;
  }
  const double nn = static_cast<double>(n);
  const double sigma = s.sigma();
  // Bound on sum_{k<=n} k^(-sigma).
  const double mass = std::abs(sigma - 1.0) < 1e-12
                          ? 1.0 + std::log(nn)
                          : 1.0 + (std::pow(nn, 1.0 - sigma) - 1.0) / (1.0 - sigma);
  return 4.0 * kDoubleUnitRoundoff * (2.0 + std::abs(s.t()) * std::log(nn + 1.0)) * mass;
}

RemainderRecord remainder(Index n, const StripPoint& s, double target_error) {
  const OracleValue e = eta(s, target_error);
  const Complex value = e.value - partial_sum(n, s);
  return {n, value, std::abs(value), e.abs_error_bound + partial_sum_rounding_bound(n, s)};
}

std::vector<RemainderRecord> remainders(const StripPoint& s, Index n_from, Index n_to,
                                        double target_error) {
  if (n_to < n_from) {
    throw Error(ErrorCode::InvalidArgument, "remainder range is empty");
  }
  const OracleValue e = eta(s, target_error);
  std::vector<RemainderRecord> out;
  out.reserve(n_to - n_from + 1);
  PartialSumStream stream(s);
  stream.advance_to(n_from);
  for (Index n = n_from;; ++n) {
    const Complex value = e.value - stream.state().sum;
    out.push_back({n, value, std::abs(value), e.abs_error_bound + partial_sum_rounding_bound(n, s)});
    if (n == n_to) {
      break;
    }
    stream.advance();
  }
  return out;
}

}  // namespace etalab
