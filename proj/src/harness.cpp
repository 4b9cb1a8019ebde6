#include "etalab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace etalab {

namespace {

constexpr double kPiOverLn2 = std::numbers::pi / std::numbers::ln2;

std::vector<double> arithmetic_grid(double from, double to, double step) {
  std::vector<double> out;
  const double slack = 1e-9 * step;
  for (std::size_t k = 0;; ++k) {
    const double v = from + static_cast<double>(k) * step;
    if (v > to + slack) {
      break;
    }
    out.push_back(v);
  }
  return out;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  // More workers than cores only adds switching; output order is fixed anyway.
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(std::min(std::max(1u, threads), cores), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace

void ScanGrid::validate() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(alpha_from) || !finite(alpha_to) || !finite(alpha_step) || !finite(t_from) ||
      !finite(t_to) || !finite(t_step)) {
    throw Error(ErrorCode::InvalidArgument, "grid values must be finite");
  }
  if (!(alpha_step > 0.0) || !(t_step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid steps must be > 0");
  }
  if (!(alpha_from >= 0.0 && alpha_from <= alpha_to && alpha_to < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "alpha range must lie in [0, 1/2)");
  }
  if (!(t_from > 0.0 && t_from <= t_to && t_to <= 200.0)) {
    throw Error(ErrorCode::InvalidArgument, "t range must lie in (0, 200]");
  }
}

std::vector<double> ScanGrid::alphas() const { return arithmetic_grid(alpha_from, alpha_to, alpha_step); }

std::vector<double> ScanGrid::ts() const { return arithmetic_grid(t_from, t_to, t_step); }

BoundCheckRecord conjecture_point(double alpha, double t, double target_error) {
  const ConjectureBounds bounds = conjecture_bounds(alpha, t);
  BoundCheckRecord r;
  r.alpha = alpha;
  r.t = t;
  r.lower = bounds.lower;
  r.upper = bounds.upper;
  r.informational = !bounds.in_stated_range;
  if (alpha == 0.0) {
    // Numerator and denominator are the same number.
    r.ratio = 1.0;
  } else {
    const OracleValue num = eta(StripPoint(0.5 + alpha, t), target_error);
    const OracleValue den = eta(StripPoint(0.5 - alpha, t), target_error);
    if (den.zero_indistinguishable()) {
      r.skipped = true;
      r.reason = "eta(1/2 - alpha + i t) is zero-indistinguishable";
      return r;
    }
    const double den_abs = std::abs(den.value);
    r.ratio = std::abs(num.value) / den_abs;
    r.ratio_error = (num.abs_error_bound + r.ratio * den.abs_error_bound) / (den_abs - den.abs_error_bound);
  }
  r.pass_lower = r.ratio >= r.lower - r.ratio_error;
  r.pass_upper = r.ratio <= r.upper + r.ratio_error;
  return r;
}

std::vector<BoundCheckRecord> scan_conjecture(const ScanGrid& grid, const HarnessOptions& options) {
  grid.validate();
  const std::vector<double> alphas = grid.alphas();
  const std::vector<double> ts = grid.ts();
  std::vector<BoundCheckRecord> out(alphas.size() * ts.size());
  parallel_for(ts.size(), options.threads, [&](std::size_t ti) {
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      out[ti * alphas.size() + ai] = conjecture_point(alphas[ai], ts[ti], options.target_error);
    }
  });
  return out;
}

std::vector<BoundCheckRecord> violations(const std::vector<BoundCheckRecord>& records) {
  std::vector<BoundCheckRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const BoundCheckRecord& r) { return r.violation(); });
  return out;
}

MonotonicityReport scan_monotonicity(double t, const std::vector<double>& alpha_grid) {
  if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end())) {
    throw Error(ErrorCode::InvalidArgument, "alpha grid must be sorted ascending");
  }
  MonotonicityReport report;
  report.t = t;
  for (const double alpha : alpha_grid) {
    if (!(alpha >= 0.0 && alpha < 0.5)) {
      throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1/2)");
    }
    report.records.push_back({alpha, std::exp(big_p(StripPoint::from_alpha(alpha, t)).log_modulus)});
  }
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    if (!(report.records[i].p_modulus < report.records[i - 1].p_modulus)) {
      ++report.inversions;
      if (!report.first_violation) {
        report.first_violation = i;
      }
    }
  }
  return report;
}

double ExtremaReport::max_minimum_distance() const noexcept {
  double worst = 0.0;
  for (const Extremum& e : extrema) {
    if (e.is_minimum) {
      worst = std::max(worst, e.distance);
    }
  }
  return worst;
}

bool ExtremaReport::one_of_each_per_window() const noexcept {
  return std::all_of(windows.begin(), windows.end(),
                     [](const ExtremaWindow& w) { return w.minima == 1 && w.maxima == 1; });
}

Extremum classify_extremum(double t, double ratio, bool is_minimum) {
  Extremum e;
  e.t = t;
  e.ratio = ratio;
  e.is_minimum = is_minimum;
  // Minima sit near even multiples, maxima near odd ones.
  const double unit = t / kPiOverLn2;
  const double k = is_minimum ? 2.0 * std::round(unit / 2.0) : 2.0 * std::floor(unit / 2.0) + 1.0;
  e.nearest_multiple = k * kPiOverLn2;
  e.distance = std::abs(t - e.nearest_multiple);
  return e;
}

std::vector<ExtremaWindow> extrema_windows(double t_from, double t_to,
                                           const std::vector<Extremum>& extrema) {
  std::vector<ExtremaWindow> out;
  for (double k = std::ceil((t_from / kPiOverLn2 + 1.0) / 2.0);; k += 1.0) {
    ExtremaWindow w{(2.0 * k - 1.0) * kPiOverLn2, (2.0 * k + 1.0) * kPiOverLn2, 0, 0};
    if (w.to > t_to) {
      break;
    }
    for (const Extremum& e : extrema) {
      if (e.t >= w.from && e.t < w.to) {
        ++(e.is_minimum ? w.minima : w.maxima);
      }
    }
    out.push_back(w);
  }
  return out;
}

ExtremaReport extrema_structure(double alpha, double t_from, double t_to, double t_step,
                                const HarnessOptions& options) {
  if (!(t_step > 0.0) || !(t_from > 0.0) || !(t_to > t_from)) {
    throw Error(ErrorCode::InvalidArgument, "extrema scan needs 0 < t_from < t_to and t_step > 0");
  }
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1/2)");
  }
  ExtremaReport report;
  report.alpha = alpha;
  report.ts = arithmetic_grid(t_from, t_to, t_step);
  const std::size_t n = report.ts.size();
  report.ratios.resize(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const BoundCheckRecord r = conjecture_point(alpha, report.ts[i], options.target_error);
    // A zero of the denominator is a pole of the ratio; keep the scan going.
    report.ratios[i] = r.skipped ? std::numeric_limits<double>::infinity() : r.ratio;
  });

  report.smoothed.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      sum += report.ratios[k];
    }
    report.smoothed[i] = sum / static_cast<double>(hi - lo + 1);
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double prev = report.smoothed[i - 1];
    const double here = report.smoothed[i];
    const double next = report.smoothed[i + 1];
    const bool is_min = here < prev && here <= next;
    const bool is_max = here > prev && here >= next;
    if (!is_min && !is_max) {
      continue;
    }
    report.extrema.push_back(classify_extremum(report.ts[i], report.ratios[i], is_min));
  }
  report.windows = extrema_windows(t_from, t_to, report.extrema);
  return report;
}

}  // namespace etalab
