#include "etalab/orbit.hpp"

#include <numbers>

#include "etalab/oracle.hpp"

namespace etalab {

namespace {

void require_acute(Index n, double t) {
  if (n == 0 || n < angle_threshold(t)) {
    throw Error(ErrorCode::AngleTooLarge,
                "index " + std::to_string(n) + " is below the acute-angle threshold");
  }
}

double sin_sq_half(double x) {
  const double h = std::sin(0.5 * x);
  return h * h;
}

// Pieces shared by numerator18 and radius_gap, scaled by n^(-2 sigma).
struct ScaledGap {
  double a;           // (1 + 1/n)^sigma
  double b;           // (1 + 2/n)^sigma
  double normalized;  // numerator18 / n^(2 sigma)
};

ScaledGap scaled_gap(Index n, const StripPoint& s) {
  require_acute(n, s.t());
  const double nn = static_cast<double>(n);
  const double sigma = s.sigma();
  const double big_a = std::expm1(sigma * std::log1p(1.0 / nn));
  const double big_b = std::expm1(sigma * std::log1p(2.0 / nn));
  const double a = 1.0 + big_a;
  const double b = 1.0 + big_b;
  const AngleTriple angles = angle_triple(n, s.t());
  // 1 - cos x = 2 sin^2(x/2)
  const double c1 = 2.0 * sin_sq_half(angles.delta1);
  const double c2 = 2.0 * sin_sq_half(angles.delta2);
  const double cb = 2.0 * sin_sq_half(angles.beta);
  // ab - a^2 - b + a = A (B - A); the cosine deficits carry the rest.
  const double normalized = big_a * (big_b - big_a) - a * b * c1 + a * a * cb / 2.0 - a * c2;
  return {a, b, normalized};
}

double delta_r_sq(Index n, double sigma) {
  const double nn = static_cast<double>(n);
  const double big_b = std::expm1(sigma * std::log1p(2.0 / nn));
  const double dr = 0.5 * std::exp(-sigma * std::log(nn)) * big_b / (1.0 + big_b);
  return dr * dr;
}

template <typename Predicate>
StableRun scan_stable_run(Index start, Predicate&& holds, const ScanOptions& options) {
  if (options.window == 0) {
    throw Error(ErrorCode::InvalidArgument, "window must be >= 1");
  }
  Index last_failure = start - 1;
  Index flips = 0;
  bool have_previous = false;
  bool previous = false;
  for (Index n = start; n <= options.ceiling; ++n) {
    const bool ok = holds(n);
    if (have_previous && ok != previous) {
      ++flips;
    }
    previous = ok;
    have_previous = true;
    if (!ok) {
      last_failure = n;
    } else if (n - last_failure >= options.window) {
      return {last_failure, flips, n};
    }
  }
  throw Error(ErrorCode::WindowExhausted, "no stable run below the scan ceiling");
}

}  // namespace

Index angle_threshold(double t) {
  const double abs_t = std::abs(t);
  if (abs_t == 0.0) {
    return 1;
  }
  const double bound = 1.0 / std::expm1(std::numbers::pi / (2.0 * abs_t));
  auto threshold = static_cast<Index>(std::max(1.0, std::ceil(bound)));
  // Guard the boundary case where rounding leaves the angle at pi/2.
  while (abs_t * std::log1p(1.0 / static_cast<double>(threshold)) >= std::numbers::pi / 2.0) {
    ++threshold;
  }
  return threshold;
}

AngleTriple angle_triple(Index n, double t) {
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "angle_triple requires n >= 1");
  }
  const double nn = static_cast<double>(n);
  const double abs_t = std::abs(t);
  return {abs_t * std::log1p(1.0 / nn), abs_t * std::log1p(1.0 / (nn + 1.0)),
          abs_t * std::log1p(2.0 / nn)};
}

DiskPair disk_pair(Index n, const StripPoint& s) {
  require_acute(n, s.t());
  const double nn = static_cast<double>(n);
  const double sigma = s.sigma();
  const AngleTriple angles = angle_triple(n, s.t());
  const double inv_n = std::pow(nn, -sigma);
  const double inv_n1 = std::pow(nn + 1.0, -sigma);
  const double inv_n2 = std::pow(nn + 2.0, -sigma);

  DiskPair pair;
  pair.n = n;
  pair.r_n = 0.5 * inv_n;
  pair.r_n2 = 0.5 * inv_n2;
  pair.c_n = {pair.r_n, 0.0};
  pair.c_n2 = {std::cos(angles.delta1) * inv_n1 - std::cos(angles.beta) * pair.r_n2,
               -std::sin(angles.delta1) * inv_n1 + std::sin(angles.beta) * pair.r_n2};
  pair.delta_c_sq = std::norm(pair.c_n2 - pair.c_n);
  pair.delta_r_sq = delta_r_sq(n, sigma);
  return pair;
}

double numerator18(Index n, const StripPoint& s) {
  const ScaledGap g = scaled_gap(n, s);
  return std::exp(2.0 * s.sigma() * std::log(static_cast<double>(n))) * g.normalized;
}

double radius_gap(Index n, const StripPoint& s) {
  const ScaledGap g = scaled_gap(n, s);
  // denominator / n^(4 sigma) = a^2 b
  const double scale = std::exp(-2.0 * s.sigma() * std::log(static_cast<double>(n)));
  return scale * g.normalized / (g.a * g.a * g.b);
}

bool containment_check(Index n, const StripPoint& s, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "containment scale must lie in (0, 1]");
  }
  const double gap = radius_gap(n, s);
  // Delta_c^2 < scale^2 Delta_r^2  <=>  gap > (1 - scale^2) Delta_r^2
  return gap > (1.0 - scale * scale) * delta_r_sq(n, s.sigma());
}

StableRun find_n_o(const StripPoint& s, const ScanOptions& options) {
  return scan_stable_run(
      angle_threshold(s.t()), [&](Index n) { return numerator18(n, s) > 0.0; }, options);
}

StableRun find_j(const StripPoint& s, double epsilon, const ScanOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  return scan_stable_run(
      angle_threshold(s.t()), [&](Index n) { return containment_check(n, s, epsilon); }, options);
}

OrbitDiagnostics find_m(const StripPoint& s, double epsilon, const ScanOptions& options) {
  const StableRun n_o = find_n_o(s, options);
  const StableRun j = find_j(s, epsilon, options);
  OrbitDiagnostics d;
  d.n_threshold = angle_threshold(s.t());
  d.n_o = n_o.index;
  d.j = j.index;
  d.m = std::max(n_o.index, j.index);
  d.epsilon = epsilon;
  d.verified_window = options.window;
  d.n_o_sign_flips = n_o.sign_flips;
  d.j_sign_flips = j.sign_flips;
  return d;
}

std::vector<RemainderBound> sandwich_report(const StripPoint& s, double epsilon, Index n_from,
                                            Index n_to, const OrbitDiagnostics& diagnostics) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (n_from <= diagnostics.m) {
    throw Error(ErrorCode::InvalidArgument, "sandwich range must start above m(s)");
  }
  const std::vector<RemainderRecord> rs = remainders(s, n_from, n_to);
  std::vector<RemainderBound> out;
  out.reserve(rs.size());
  for (const RemainderRecord& r : rs) {
    const double upper = std::exp(-s.sigma() * std::log(static_cast<double>(r.n)));
    out.push_back({r.n, (1.0 - epsilon) * upper / 2.0, r.magnitude, upper});
  }
  return out;
}

std::vector<RemainderBound> sandwich_report(const StripPoint& s, double epsilon, Index n_from,
                                            Index n_to, const ScanOptions& options) {
  return sandwich_report(s, epsilon, n_from, n_to, find_m(s, epsilon, options));
}

}  // namespace etalab
