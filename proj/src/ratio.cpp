#include "etalab/ratio.hpp"

#include <algorithm>
#include <limits>

#include "etalab/functional.hpp"

namespace etalab {

namespace {

void require_left_half_closure(const StripPoint& s) {
  if (!(s.sigma() <= 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "ratio analysis requires 0 < sigma <= 1/2");
  }
}

int sign_with_tolerance(double x, double tolerance) {
  if (x > tolerance) return 1;
  if (x < -tolerance) return -1;
  return 0;
}

}  // namespace

RatioSample ratio_p_n(Index n, const StripPoint& s, double threshold) {
  require_left_half_closure(s);
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "ratio index must be >= 1");
  }
  DualPartialSumStream stream(s);
  stream.advance_to(n);
  const double denom = std::abs(stream.sum());
  if (denom <= threshold) {
    throw Error(ErrorCode::ZeroDenominator, "S_" + std::to_string(n) + "(s) vanishes");
  }
  return {n, stream.reflected_sum() / stream.sum(), denom};
}

std::size_t ZeroSumReport::flagged_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [](const ZeroSumEvent& e) { return !e.below_n_o; }));
}

ZeroSumReport detect_zero_sums(const StripPoint& s, Index n_max, double threshold,
                               ThresholdScale scale, const ScanOptions& options) {
  if (n_max == 0 || n_max > 10'000'000) {
    throw Error(ErrorCode::InvalidArgument, "n_max must lie in [1, 1e7]");
  }
  ZeroSumReport report;
  report.n_o = find_n_o(s, options).index;
  report.min_magnitude = std::numeric_limits<double>::infinity();
  PartialSumStream stream(s);
  for (Index n = 1; n <= n_max; ++n) {
    const double magnitude = std::abs(stream.advance().sum);
    if (magnitude < report.min_magnitude) {
      report.min_magnitude = magnitude;
      report.argmin = n;
    }
    double limit = threshold;
    if (scale == ThresholdScale::SegmentRelative) {
      limit *= std::exp(-s.sigma() * std::log(static_cast<double>(n)));
    }
    if (magnitude < limit) {
      report.events.push_back({n, magnitude, n <= report.n_o});
    }
  }
  return report;
}

std::pair<Index, double> argmin_partial_sum(const StripPoint& s, Index n_from, Index n_to) {
  if (n_from == 0 || n_to < n_from) {
    throw Error(ErrorCode::InvalidArgument, "argmin range must satisfy 1 <= from <= to");
  }
  PartialSumStream stream(s);
  stream.advance_to(n_from - 1);
  Index best = n_from;
  double best_magnitude = std::numeric_limits<double>::infinity();
  for (Index n = n_from; n <= n_to; ++n) {
    const double magnitude = std::abs(stream.advance().sum);
    if (magnitude < best_magnitude) {
      best_magnitude = magnitude;
      best = n;
    }
  }
  return {best, best_magnitude};
}

LimitEstimate limit_estimate(const StripPoint& s, Index n_max, double tol, double threshold) {
  require_left_half_closure(s);
  if (n_max == 0) {
    throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  }
  LimitEstimate estimate;
  std::optional<Complex> last_odd;
  std::optional<Complex> last_even;
  DualPartialSumStream stream(s);
  for (Index n = 1; n <= n_max; ++n) {
    stream.advance();
    const Complex denominator = stream.sum();
    if (std::abs(denominator) <= threshold) {
      estimate.skipped.push_back(n);
      continue;
    }
    const Complex ratio = stream.reflected_sum() / denominator;
    (n % 2 == 1 ? last_odd : last_even) = ratio;
  }
  if (!last_odd && !last_even) {
    throw Error(ErrorCode::ZeroDenominator, "every partial sum vanished");
  }
  if (last_odd && last_even) {
    // Geometric mean: cancels the alternating leading term like the plain
    // mean, and keeps |L| = 1 exactly when both moduli are 1.
    estimate.value = *last_odd * std::exp(0.5 * std::log(*last_even / *last_odd));
    estimate.residual = std::abs(*last_odd - *last_even);
  } else {
    estimate.value = last_odd ? *last_odd : *last_even;
  }
  estimate.n_used = n_max;
  estimate.zero_flag = std::abs(estimate.value) < std::max(tol, 10.0 * estimate.residual);
  return estimate;
}

std::vector<RatioSample> ratio_samples(const StripPoint& s, Index n_from, Index n_to,
                                       double threshold) {
  require_left_half_closure(s);
  if (n_from == 0 || n_to < n_from) {
    throw Error(ErrorCode::InvalidArgument, "ratio range must satisfy 1 <= from <= to");
  }
  std::vector<RatioSample> out;
  out.reserve(n_to - n_from + 1);
  DualPartialSumStream stream(s);
  stream.advance_to(n_from - 1);
  for (Index n = n_from; n <= n_to; ++n) {
    stream.advance();
    const double denom = std::abs(stream.sum());
    if (denom > threshold) {
      out.push_back({n, stream.reflected_sum() / stream.sum(), denom});
    }
  }
  return out;
}

EnvelopeReport envelope_diagnostics(const StripPoint& s, Index n_from, Index n_to) {
  EnvelopeReport report;
  report.p_modulus = std::exp(big_p(s).log_modulus);
  const double tolerance = 1e-12 * std::max(1.0, report.p_modulus);
  for (const RatioSample& sample : ratio_samples(s, n_from, n_to)) {
    report.signs.push_back(sign_with_tolerance(std::abs(sample.value) - report.p_modulus, tolerance));
  }
  std::size_t run = 0;
  for (std::size_t i = 0; i < report.signs.size(); ++i) {
    if (i > 0) {
      const int a = report.signs[i - 1];
      const int b = report.signs[i];
      if (a != 0 && b != 0 && a != b) {
        ++report.alternations;
      }
      if (a != b) {
        ++report.run_lengths[run];
        run = 0;
      }
    }
    ++run;
  }
  if (run > 0) {
    ++report.run_lengths[run];
  }
  if (report.signs.size() > 1) {
    report.alternation_rate =
        static_cast<double>(report.alternations) / static_cast<double>(report.signs.size() - 1);
  }
  return report;
}

EnvelopeBoundReport envelope_bound_check(const StripPoint& s, Index n_cal, Index n_to,
                                         double factor) {
  if (!(factor > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "envelope factor must be > 0");
  }
  const Complex p = big_p(s).value;
  EnvelopeBoundReport report;
  report.calibration_n = n_cal;
  report.n_to = n_to;
  for (const RatioSample& sample : ratio_samples(s, n_cal, n_to)) {
    const double scaled =
        std::abs(sample.value - p) * std::exp(s.sigma() * std::log(static_cast<double>(sample.n)));
    if (sample.n == n_cal) {
      report.calibration_value = scaled;
      report.k = factor * scaled;
    }
    if (scaled > report.max_scaled) {
      report.max_scaled = scaled;
      report.argmax = sample.n;
    }
    if (scaled > report.k) {
      ++report.violations;
      if (!report.first_violation) {
        report.first_violation = sample.n;
      }
    }
  }
  if (report.k == 0.0) {
    throw Error(ErrorCode::ZeroDenominator, "calibration index has a vanishing denominator");
  }
  return report;
}

double ratio_modulus_at_alpha(Index n, double t, double alpha) {
  return std::abs(ratio_p_n(n, StripPoint::from_alpha(alpha, t)).value);
}

std::size_t alpha_sign_changes(Index n, Index m, double t, const std::vector<double>& alpha_grid) {
  if (n == m) {
    return 0;
  }
  std::size_t changes = 0;
  int previous = 0;
  for (const double alpha : alpha_grid) {
    const double diff = ratio_modulus_at_alpha(n, t, alpha) - ratio_modulus_at_alpha(m, t, alpha);
    const int sign = sign_with_tolerance(diff, 1e-13);
    if (sign == 0) {
      continue;
    }
    if (previous != 0 && sign != previous) {
      ++changes;
    }
    previous = sign;
  }
  return changes;
}

double alpha_fd_slope(Index n, double t, double alpha, double step) {
  if (!(step > 0.0) || !(alpha >= 0.0) || !(alpha + step < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "alpha +/- step must stay inside [0, 1/2)");
  }
  if (alpha == 0.0) {
    return (ratio_modulus_at_alpha(n, t, step) - 1.0) / step;
  }
  if (alpha - step < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "alpha - step must be >= 0");
  }
  return (ratio_modulus_at_alpha(n, t, alpha + step) - ratio_modulus_at_alpha(n, t, alpha - step)) /
         (2.0 * step);
}

double vertex_distance(Index m, Index j, const StripPoint& s) {
  if (j == 0) {
    throw Error(ErrorCode::InvalidArgument, "vertex distance requires j >= 1");
  }
  CompensatedSum acc;
  for (Index k = m + 1; k <= m + j; ++k) {
    acc.add(eta_term(k, s));
  }
  return std::abs(acc.value());
}

}  // namespace etalab
