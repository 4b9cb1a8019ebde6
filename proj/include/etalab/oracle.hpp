#pragma once

#include <vector>

#include "etalab/series.hpp"

namespace etalab {

/// A reference value together with a bound on its absolute error.
struct OracleValue {
  Complex value{};
  double abs_error_bound = 0.0;
  Index terms = 0;  // accelerated terms actually summed

  /// |value| < 10 * abs_error_bound: cannot be told apart from an exact zero.
  bool zero_indistinguishable() const noexcept {
    return std::abs(value) < 10.0 * abs_error_bound;
  }
};

struct OracleOptions {
  Index max_terms = 600;
  Index certificate_extra_terms = 8;
};

constexpr double kOracleErrorFloor = 1e-13;

/// Number of accelerated terms used for eta(s) at the given target error.
/// Throws AccuracyUnreachable if it exceeds options.max_terms.
Index oracle_term_count(const StripPoint& s, double target_error, const OracleOptions& options = {});

/// Analytic truncation bound of the accelerated sum after `terms` terms:
/// 2 (3 + sqrt 8)^(-terms) Gamma(sigma) / |Gamma(s)|.
double acceleration_truncation_bound(const StripPoint& s, Index terms);

/// eta(s) by Cohen-Rodriguez Villegas-Zagier acceleration of the
/// alternating series, evaluated in extended precision.
///
/// The term count covers the analytic error bound, which grows like
/// e^(pi |t| / 2) for complex arguments. The result is cross-checked against
/// a run with a few more terms; the reported bound is never smaller than the
/// observed disagreement. Throws AccuracyUnreachable if target_error cannot be
/// certified and InvalidArgument if target_error is below kOracleErrorFloor.
OracleValue eta(const StripPoint& s, double target_error = kOracleErrorFloor,
                const OracleOptions& options = {});

/// Default target for zeta. The phase of 2^(1 - s) carries a relative error
/// of order |t| times the unit roundoff, and 1 / |1 - 2^(1 - s)| amplifies it,
/// so the eta floor is not reachable here for moderate t.
constexpr double kZetaDefaultTarget = 1e-11;

/// zeta(s) = eta(s) / (1 - 2^(1 - s)). Throws DenominatorPole within 1e-9 of
/// the points 1 + k (2 pi / ln 2) i.
OracleValue zeta(const StripPoint& s, double target_error = kZetaDefaultTarget,
                 const OracleOptions& options = {});

/// R_n(s) = eta(s) - S_n(s).
struct RemainderRecord {
  Index n = 0;
  Complex value{};
  double magnitude = 0.0;
  double abs_error_bound = 0.0;
};

RemainderRecord remainder(Index n, const StripPoint& s, double target_error = kOracleErrorFloor);

/// Remainders for every n in [n_from, n_to], sharing one eta evaluation and
/// one streaming pass.
std::vector<RemainderRecord> remainders(const StripPoint& s, Index n_from, Index n_to,
                                        double target_error = kOracleErrorFloor);

/// Rounding bound for a streamed double-precision S_n(s).
double partial_sum_rounding_bound(Index n, const StripPoint& s);

}  // namespace etalab
