#include "etalab/asymptotics.hpp"

namespace etalab {

namespace {

AsymptoticRecord make_record(Index n, double exact, double leading) {
  return {n, exact, leading, exact / leading};
}

double pow_neg(double base, double sigma) { return std::exp(-sigma * std::log(base)); }

}  // namespace

AsymptoticRecord check_dr2_minus_dc2(Index n, const StripPoint& s) {
  const double nn = static_cast<double>(n);
  const double sigma = s.sigma();
  const double leading =
      sigma * sigma / (nn * (nn + 1.0)) * pow_neg(nn + 1.0, sigma) * pow_neg(nn + 2.0, sigma);
  return make_record(n, radius_gap(n, s), leading);
}

AsymptoticRecord check_eps_radius(Index n, const StripPoint& s, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1]");
  }
  const double nn = static_cast<double>(n);
  const double sigma = s.sigma();
  const DiskPair pair = disk_pair(n, s);
  // eps^2 dr^2 - dc^2 = gap - (1 - eps^2) dr^2, with the gap taken from the
  // cancellation-free form.
  const double exact = radius_gap(n, s) - (1.0 - eps * eps) * pair.delta_r_sq;
  const double leading = eps * eps * sigma * sigma / (nn * (nn + 1.0)) * pow_neg(nn + 2.0, 2.0 * sigma);
  return make_record(n, exact, leading);
}

AsymptoticRecord check_half_radius(Index n, const StripPoint& s) { return check_eps_radius(n, s, 0.5); }

}  // namespace etalab
