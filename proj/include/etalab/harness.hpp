#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etalab/functional.hpp"

namespace etalab {

/// Rectangular (alpha, t) grid. Values are from + k * step up to `to`
/// (inclusive, with a small tolerance for accumulated rounding).
struct ScanGrid {
  double alpha_from = 0.0;
  double alpha_to = 0.45;
  double alpha_step = 0.05;
  double t_from = kConjectureMinT;
  double t_to = 120.0;
  double t_step = 0.25;

  /// alpha range inside [0, 1/2), t range inside (0, 200], steps > 0.
  void validate() const;
  std::vector<double> alphas() const;
  std::vector<double> ts() const;
  std::size_t cardinality() const { return alphas().size() * ts().size(); }
};

struct BoundCheckRecord {
  double alpha = 0.0;
  double t = 0.0;
  double ratio = 0.0;  // |eta(1/2 + alpha + i t) / eta(1/2 - alpha + i t)|
  double lower = 0.0;
  double upper = 0.0;
  bool pass_lower = false;
  bool pass_upper = false;
  bool skipped = false;        // denominator indistinguishable from zero
  bool informational = false;  // t below 2 pi + 1
  double ratio_error = 0.0;    // propagated oracle bound on `ratio`
  std::string reason;

  bool violation() const noexcept { return !skipped && !informational && !(pass_lower && pass_upper); }
};

struct HarnessOptions {
  unsigned threads = 1;
  double target_error = 1e-12;
};

/// One record per grid point in t-major order (all alphas for t_0, then t_1,
/// ...), independent of the thread count.
std::vector<BoundCheckRecord> scan_conjecture(const ScanGrid& grid, const HarnessOptions& options = {});

std::vector<BoundCheckRecord> violations(const std::vector<BoundCheckRecord>& records);

struct MonotonicityRecord {
  double alpha = 0.0;
  double p_modulus = 0.0;  // |P(1/2 - alpha + i t)|
};

struct MonotonicityReport {
  double t = 0.0;
  std::vector<MonotonicityRecord> records;
  std::size_t inversions = 0;
  std::optional<std::size_t> first_violation;  // index into records

  bool strictly_decreasing() const noexcept { return inversions == 0; }
};

/// Strict decrease of |P(1/2 - alpha + i t)| along an ascending alpha grid.
MonotonicityReport scan_monotonicity(double t, const std::vector<double>& alpha_grid);

struct Extremum {
  double t = 0.0;
  double ratio = 0.0;
  bool is_minimum = false;
  double nearest_multiple = 0.0;  // even multiple of pi/ln 2 for minima, odd for maxima
  double distance = 0.0;
};

struct ExtremaWindow {
  double from = 0.0;  // (2k - 1) pi / ln 2
  double to = 0.0;    // (2k + 1) pi / ln 2
  std::size_t minima = 0;
  std::size_t maxima = 0;
};

struct ExtremaReport {
  double alpha = 0.0;
  std::vector<double> ts;
  std::vector<double> ratios;    // raw |eta(1/2+a+it)/eta(1/2-a+it)|
  std::vector<double> smoothed;  // width-3 moving average
  std::vector<Extremum> extrema;
  std::vector<ExtremaWindow> windows;  // only windows fully inside the range

  double max_minimum_distance() const noexcept;
  bool one_of_each_per_window() const noexcept;
};

/// Labels a local extremum at t with its nearest even (minimum) or odd
/// (maximum) multiple of pi/ln 2.
Extremum classify_extremum(double t, double ratio, bool is_minimum);

/// Complete windows [(2k - 1), (2k + 1)) pi/ln 2 inside [t_from, t_to] with
/// the extrema that fall in each.
std::vector<ExtremaWindow> extrema_windows(double t_from, double t_to,
                                           const std::vector<Extremum>& extrema);

/// Local extrema of the ratio along t at fixed alpha after width-3
/// smoothing, compared against multiples of pi/ln 2.
ExtremaReport extrema_structure(double alpha, double t_from, double t_to, double t_step,
                                const HarnessOptions& options = {});

/// The ratio itself with its propagated error bound; skipped when the
/// denominator is zero-indistinguishable.
BoundCheckRecord conjecture_point(double alpha, double t, double target_error = 1e-12);

}  // namespace etalab
