#pragma once

#include <map>
#include <optional>
#include <vector>

#include "etalab/orbit.hpp"

namespace etalab {

// The ratio sequence P_n(s) = S_n(1 - s) / S_n(s) uses the true reflection
// 1 - s = (1 - sigma) - i t, so P_n(s) -> P(s) as complex numbers. Moduli are
// the same as with the mirror point 1 - conj(s).

constexpr double kDefaultZeroThreshold = 1e-9;

struct RatioSample {
  Index n = 0;
  Complex value{};
  double denom_magnitude = 0.0;  // |S_n(s)|
};

/// Requires 0 < sigma <= 1/2. Throws ZeroDenominator when
/// |S_n(s)| <= threshold.
RatioSample ratio_p_n(Index n, const StripPoint& s, double threshold = kDefaultZeroThreshold);

enum class ThresholdScale {
  Absolute,         // |S_n| < threshold
  SegmentRelative,  // |S_n| < threshold * n^(-sigma)
};

struct ZeroSumEvent {
  Index n = 0;
  double magnitude = 0.0;
  bool below_n_o = true;  // false: past the disk-nesting onset
};

struct ZeroSumReport {
  std::vector<ZeroSumEvent> events;
  Index n_o = 0;
  Index argmin = 0;  // index of the smallest |S_n| seen
  double min_magnitude = 0.0;

  std::size_t flagged_count() const noexcept;
};

/// Every n <= n_max with |S_n(s)| under the threshold. Events past n_o(s)
/// are flagged; at most one such event can exist for a given s.
ZeroSumReport detect_zero_sums(const StripPoint& s, Index n_max, double threshold,
                               ThresholdScale scale = ThresholdScale::Absolute,
                               const ScanOptions& options = {});

/// Smallest |S_n(s)| over [n_from, n_to].
std::pair<Index, double> argmin_partial_sum(const StripPoint& s, Index n_from, Index n_to);

struct LimitEstimate {
  Complex value{};
  Index n_used = 0;
  double residual = 0.0;  // gap between the last odd- and even-indexed ratios
  bool zero_flag = false;
  std::vector<Index> skipped;  // indices with a vanishing denominator
};

/// Geometric mean of the last odd- and even-indexed P_n, n <= n_max, skipping
/// vanishing denominators. zero_flag marks |value| < max(tol, 10 residual).
LimitEstimate limit_estimate(const StripPoint& s, Index n_max, double tol = 1e-12,
                             double threshold = kDefaultZeroThreshold);

/// |P_n(s)| for every n in [n_from, n_to], one streaming pass.
std::vector<RatioSample> ratio_samples(const StripPoint& s, Index n_from, Index n_to,
                                       double threshold = kDefaultZeroThreshold);

struct EnvelopeReport {
  double p_modulus = 0.0;
  std::vector<int> signs;  // sign of |P_n| - |P| per n, 0 within rounding
  std::size_t alternations = 0;
  double alternation_rate = 0.0;
  std::map<std::size_t, std::size_t> run_lengths;  // run length -> count
};

/// Which side of |P(s)| each |P_n(s)| falls on for n in [n_from, n_to].
EnvelopeReport envelope_diagnostics(const StripPoint& s, Index n_from, Index n_to);

struct EnvelopeBoundReport {
  Index calibration_n = 0;
  double calibration_value = 0.0;  // |P_n - P| n^sigma at calibration_n
  double k = 0.0;                  // factor * calibration_value
  Index n_to = 0;
  double max_scaled = 0.0;  // max |P_n - P| n^sigma over the range
  Index argmax = 0;
  std::size_t violations = 0;  // n with |P_n - P| > K n^(-sigma)
  std::optional<Index> first_violation;
};

/// Calibrates K at n_cal and checks |P_n - P| <= K n^(-sigma) for every
/// n in [n_cal, n_to].
EnvelopeBoundReport envelope_bound_check(const StripPoint& s, Index n_cal, Index n_to,
                                         double factor = 2.0);

/// Sign changes of |P_n| - |P_m| along alpha at fixed t; zeros are skipped.
std::size_t alpha_sign_changes(Index n, Index m, double t, const std::vector<double>& alpha_grid);

/// |P_n(1/2 - alpha + i t)|.
double ratio_modulus_at_alpha(Index n, double t, double alpha);

/// Central difference in alpha of |P_n(1/2 - alpha + i t)|; at alpha = 0 a
/// forward difference anchored at |P_n| = 1.
double alpha_fd_slope(Index n, double t, double alpha, double step);

/// |S_{m+j}(s) - S_m(s)|, summed directly over the j terms.
double vertex_distance(Index m, Index j, const StripPoint& s);

}  // namespace etalab
