#pragma once

#include <cstdint>
#include <vector>

#include "etalab/strip_point.hpp"

namespace etalab {

using Index = std::uint64_t;

/// Neumaier-compensated accumulator, applied separately to both components.
class CompensatedSum {
 public:
  void add(Complex x) noexcept {
    add_component(re_, re_c_, x.real());
    add_component(im_, im_c_, x.imag());
  }
  Complex value() const noexcept { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_component(double& sum, double& comp, double x) noexcept {
    const double next = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - next) + x;
    } else {
      comp += (x - next) + sum;
    }
    sum = next;
  }

  double re_ = 0.0, re_c_ = 0.0;
  double im_ = 0.0, im_c_ = 0.0;
};

/// (-1)^(n-1) n^(-s). Requires n >= 1.
Complex eta_term(Index n, const StripPoint& s);

/// S_n(s), the n-th partial sum of the alternating series. n = 0 gives 0.
Complex partial_sum(Index n, const StripPoint& s);

struct SeriesState {
  Index n = 0;
  Complex sum{};        // S_n
  Complex last_term{};  // (-1)^(n-1) n^(-s)
};

/// Streaming S_n(s) with O(1) work per step.
///
/// Terms are generated at |t| and conjugated on the way out, so a stream at
/// conj(s) is bit-for-bit the conjugate of the stream at s.
class PartialSumStream {
 public:
  explicit PartialSumStream(const StripPoint& s);

  /// Moves from n to n + 1 and returns the new state.
  const SeriesState& advance();
  void advance_to(Index n);

  const SeriesState& state() const noexcept { return state_; }
  const StripPoint& point() const noexcept { return point_; }

 private:
  StripPoint point_;
  double abs_t_;
  bool conjugate_;
  CompensatedSum acc_;
  SeriesState state_;
};

/// Advances S_n(s) and S_n(1 - s) in lockstep, sharing ln n and the phase.
/// Requires sigma < 1 so that 1 - s stays in the half plane.
class DualPartialSumStream {
 public:
  explicit DualPartialSumStream(const StripPoint& s);

  void advance();
  void advance_to(Index n);

  Index n() const noexcept { return n_; }
  Complex sum() const noexcept;            // S_n(s)
  Complex reflected_sum() const noexcept;  // S_n(1 - s)

 private:
  StripPoint point_;
  double abs_t_;
  bool conjugate_;
  CompensatedSum acc_;
  CompensatedSum reflected_acc_;
  Index n_ = 0;
};

/// Direction of segment n in the partial-sum path:
/// -t ln n for odd n, pi - t ln n for even n.
double segment_angle(Index n, double t);

/// Acute angle between segments n and n + 1, t ln((n + 1) / n). Requires t >= 0.
double turn_angle(Index n, double t);

struct Segment {
  Index n = 0;
  Complex start{};  // S_{n-1}
  Complex end{};    // S_n
  double length = 0.0;
  double theta = 0.0;
};

/// Segments n_from..n_to (inclusive) of the path for s.
std::vector<Segment> path_segments(const StripPoint& s, Index n_from, Index n_to);

}  // namespace etalab
