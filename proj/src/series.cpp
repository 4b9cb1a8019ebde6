#include "etalab/series.hpp"

#include <numbers>

namespace etalab {

namespace {

// (-1)^(n-1) n^(-sigma) e^(-i t ln n) for t >= 0, given ln n.
Complex term_from_log(Index n, double log_n, double sigma, double abs_t) {
  const double magnitude = std::exp(-sigma * log_n);
  const double phase = abs_t * log_n;
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  return {sign * magnitude * std::cos(phase), -sign * magnitude * std::sin(phase)};
}

}  // namespace

Complex eta_term(Index n, const StripPoint& s) {
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "eta_term index must be >= 1");
  }
  const Complex term =
      term_from_log(n, std::log(static_cast<double>(n)), s.sigma(), std::abs(s.t()));
  return s.t() < 0.0 ? std::conj(term) : term;
}

Complex partial_sum(Index n, const StripPoint& s) {
  PartialSumStream stream(s);
  stream.advance_to(n);
  return stream.state().sum;
}

PartialSumStream::PartialSumStream(const StripPoint& s)
    : point_(s), abs_t_(std::abs(s.t())), conjugate_(s.t() < 0.0) {}

const SeriesState& PartialSumStream::advance() {
  const Index n = state_.n + 1;
  const Complex term =
      term_from_log(n, std::log(static_cast<double>(n)), point_.sigma(), abs_t_);
  acc_.add(term);
  state_.n = n;
  state_.sum = conjugate_ ? std::conj(acc_.value()) : acc_.value();
  state_.last_term = conjugate_ ? std::conj(term) : term;
  return state_;
}

void PartialSumStream::advance_to(Index n) {
  while (state_.n < n) {
    advance();
  }
}

DualPartialSumStream::DualPartialSumStream(const StripPoint& s)
    : point_(s), abs_t_(std::abs(s.t())), conjugate_(s.t() < 0.0) {
  if (!s.in_critical_strip()) {
    throw Error(ErrorCode::InvalidArgument, "dual stream requires sigma < 1");
  }
}

void DualPartialSumStream::advance() {
  ++n_;
  const double log_n = std::log(static_cast<double>(n_));
  const double phase = abs_t_ * log_n;
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  const double sign = (n_ % 2 == 1) ? 1.0 : -1.0;
  const double mag = sign * std::exp(-point_.sigma() * log_n);
  const double mag_reflected = sign * std::exp(-(1.0 - point_.sigma()) * log_n);
  // 1 - s carries -t, so its phase is the conjugate one.
  acc_.add({mag * c, -mag * sn});
  reflected_acc_.add({mag_reflected * c, mag_reflected * sn});
}

void DualPartialSumStream::advance_to(Index n) {
  while (n_ < n) {
    advance();
  }
}

Complex DualPartialSumStream::sum() const noexcept {
  return conjugate_ ? std::conj(acc_.value()) : acc_.value();
}

Complex DualPartialSumStream::reflected_sum() const noexcept {
  return conjugate_ ? std::conj(reflected_acc_.value()) : reflected_acc_.value();
}

double segment_angle(Index n, double t) {
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "segment index must be >= 1");
  }
  const double base = -t * std::log(static_cast<double>(n));
  return (n % 2 == 0) ? std::numbers::pi + base : base;
}

double turn_angle(Index n, double t) {
  if (n == 0 || t < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "turn_angle requires n >= 1 and t >= 0");
  }
  return t * std::log1p(1.0 / static_cast<double>(n));
}

std::vector<Segment> path_segments(const StripPoint& s, Index n_from, Index n_to) {
  if (n_from == 0 || n_to < n_from) {
    throw Error(ErrorCode::InvalidArgument, "segment range must satisfy 1 <= from <= to");
  }
  std::vector<Segment> out;
  out.reserve(n_to - n_from + 1);
  PartialSumStream stream(s);
  stream.advance_to(n_from - 1);
  Complex previous = stream.state().sum;
  for (Index n = n_from; n <= n_to; ++n) {
    const SeriesState& st = stream.advance();
    out.push_back({n, previous, st.sum,
                   std::exp(-s.sigma() * std::log(static_cast<double>(n))),
                   segment_angle(n, s.t())});
    previous = st.sum;
  }
  return out;
}

}  // namespace etalab
