#pragma once

#include <vector>

#include "etalab/series.hpp"

namespace etalab {

/// N(t): the smallest integer not less than 1 / (e^(pi / 2t) - 1), and at
/// least 1. From this index on the turn angle between consecutive segments
/// is acute. Uses |t|; t = 0 gives 1.
Index angle_threshold(double t);

/// Angles of the triangle formed by segments n, n + 1, n + 2.
struct AngleTriple {
  double delta1 = 0.0;  // t ln((n+1)/n)
  double delta2 = 0.0;  // t ln((n+2)/(n+1))
  double beta = 0.0;    // t ln((n+2)/n)
};

AngleTriple angle_triple(Index n, double t);

/// Circles built on segments n and n + 2 as diameters, in the frame where
/// S_n is the origin and segment n lies on the positive real axis.
struct DiskPair {
  Index n = 0;
  Complex c_n{};
  Complex c_n2{};
  double r_n = 0.0;
  double r_n2 = 0.0;
  double delta_c_sq = 0.0;  // |C_{n+2} - C_n|^2, straight from the centers
  double delta_r_sq = 0.0;  // (r_n - r_{n+2})^2
};

/// Throws AngleTooLarge below angle_threshold(t).
DiskPair disk_pair(Index n, const StripPoint& s);

/// Numerator of Delta_r^2 - Delta_c^2 over the common positive denominator
/// n^s (n+1)^2s (n+2)^s (s standing for sigma):
///
///   (n+1)^s [(n+2)^s cos d1 - (n+1)^s (1 + cos b) / 2] - n^s [(n+2)^s - (n+1)^s cos(b - d1)]
///
/// Evaluated with exact cosines, rearranged so that the O(1) parts cancel
/// analytically instead of in floating point. Throws AngleTooLarge.
double numerator18(Index n, const StripPoint& s);

/// Delta_r^2 - Delta_c^2, the same quantity divided by its denominator.
double radius_gap(Index n, const StripPoint& s);

/// True iff Delta_c < scale * (r_n - r_{n+2}): the disk of radius
/// scale * r_{n+2} around C_{n+2} lies strictly inside the disk of radius
/// scale * r_n around C_n. Requires 0 < scale <= 1. Throws AngleTooLarge.
bool containment_check(Index n, const StripPoint& s, double scale);

struct ScanOptions {
  Index window = 1000;
  Index ceiling = 10'000'000;
};

/// Outcome of a scan for the onset of an eventually-true predicate.
struct StableRun {
  Index index = 0;             // last failing index before the stable run
  Index sign_flips = 0;        // predicate changes seen during the scan
  Index verified_through = 0;  // predicate held on (index, verified_through]

  bool multiple_flips() const noexcept { return sign_flips > 1; }
};

/// n_o(s): last index with numerator18 <= 0 followed by `window` positive
/// values. Returns angle_threshold(t) - 1 if positive from the threshold on.
/// Throws WindowExhausted past options.ceiling.
StableRun find_n_o(const StripPoint& s, const ScanOptions& options = {});

/// j(s): the analogous onset for containment at scale epsilon, which gives
/// |R_n| > (1 - epsilon) r_n.
StableRun find_j(const StripPoint& s, double epsilon, const ScanOptions& options = {});

struct OrbitDiagnostics {
  Index n_threshold = 0;  // N(t)
  Index n_o = 0;
  Index j = 0;
  Index m = 0;  // max(n_o, j)
  double epsilon = 0.0;
  Index verified_window = 0;
  Index n_o_sign_flips = 0;
  Index j_sign_flips = 0;

  bool multiple_flips() const noexcept { return n_o_sign_flips > 1 || j_sign_flips > 1; }
};

/// Requires 0 < epsilon < 1.
OrbitDiagnostics find_m(const StripPoint& s, double epsilon, const ScanOptions& options = {});

struct RemainderBound {
  Index n = 0;
  double lower = 0.0;     // (1 - epsilon) / (2 n^sigma)
  double measured = 0.0;  // |R_n| from the oracle
  double upper = 0.0;     // n^(-sigma)

  bool holds() const noexcept { return lower < measured && measured < upper; }
};

/// Remainder sandwich for n in [n_from, n_to]. Requires n_from > m.
std::vector<RemainderBound> sandwich_report(const StripPoint& s, double epsilon, Index n_from,
                                            Index n_to, const OrbitDiagnostics& diagnostics);

/// Same, computing the diagnostics first.
std::vector<RemainderBound> sandwich_report(const StripPoint& s, double epsilon, Index n_from,
                                            Index n_to, const ScanOptions& options = {});

}  // namespace etalab
