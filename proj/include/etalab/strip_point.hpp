#pragma once

#include <cmath>
#include <complex>

#include "etalab/errors.hpp"

namespace etalab {

using Complex = std::complex<double>;

/// A point s = sigma + i t of the half plane Re(s) > 0.
///
/// Most of the library is about the critical strip 0 < sigma < 1, but the
/// oracle and the series kernels are valid for any sigma > 0, so the type
/// only enforces that. alpha = 1/2 - sigma is the offset from the critical
/// line used throughout the symmetric-argument analysis.
class StripPoint {
 public:
  StripPoint(double sigma, double t) : sigma_(sigma), t_(t) {
    if (!std::isfinite(sigma) || !std::isfinite(t)) {
      throw Error(ErrorCode::InvalidArgument, "non-finite strip point");
    }
    if (!(sigma > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
    }
  }

  /// s = 1/2 - alpha + i t
  static StripPoint from_alpha(double alpha, double t) { return {0.5 - alpha, t}; }

  double sigma() const noexcept { return sigma_; }
  double t() const noexcept { return t_; }
  double alpha() const noexcept { return 0.5 - sigma_; }

  Complex value() const noexcept { return {sigma_, t_}; }

  StripPoint conj() const { return {sigma_, -t_}; }

  /// 1 - s. Requires sigma < 1.
  StripPoint reflected() const { return {1.0 - sigma_, -t_}; }

  /// 1 - conj(s): the critical-line mirror image with the same t.
  StripPoint mirrored() const { return {1.0 - sigma_, t_}; }

  bool in_critical_strip() const noexcept { return sigma_ < 1.0; }

  /// Open left half of the critical strip, 0 < sigma < 1/2.
  bool in_left_half() const noexcept { return sigma_ < 0.5; }

  friend bool operator==(const StripPoint&, const StripPoint&) = default;

 private:
  double sigma_;
  double t_;
};

}  // namespace etalab
