#include "etalab/gamma.hpp"

#include <array>
#include <numbers>

namespace etalab {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

const double kHalfLogTwoPi = 0.5 * std::log(2.0 * std::numbers::pi);

Complex log_gamma_lanczos(Complex z) {
  z -= 1.0;
  Complex series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    series += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  const Complex shifted = z + kLanczosG + 0.5;
  return kHalfLogTwoPi + (z + 0.5) * std::log(shifted) - shifted + std::log(series);
}

bool is_non_positive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

Complex log_sin_pi(Complex z) {
  const double pi = std::numbers::pi;
  if (std::abs(z.imag()) < 10.0) {
    return std::log(std::sin(pi * z));
  }
  if (z.imag() < 0.0) {
    return std::conj(log_sin_pi(std::conj(z)));
  }
  // sin(pi z) = e^(-i pi z) (e^(2 i pi z) - 1) / (2i); |e^(2 i pi z)| is tiny here.
  const Complex i{0.0, 1.0};
  return -i * pi * z + std::log(std::exp(2.0 * i * pi * z) - 1.0) - std::log(2.0 * i);
}

Complex log_cos_half_pi(Complex z) {
  return log_sin_pi((1.0 - z) / 2.0);
}

Complex log_gamma(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::InvalidArgument, "log_gamma of non-finite argument");
  }
  if (is_non_positive_integer(z)) {
    throw Error(ErrorCode::PoleError, "Gamma has a pole at non-positive integers");
  }
  if (z.real() < 0.5) {
    return std::log(std::numbers::pi) - log_sin_pi(z) - log_gamma_lanczos(1.0 - z);
  }
  return log_gamma_lanczos(z);
}

Complex gamma(Complex z) {
  return std::exp(log_gamma(z));
}

}  // namespace etalab
