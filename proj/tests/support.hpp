#pragma once

#include <complex>
#include <random>

#include "doctest.h"
#include "etalab/errors.hpp"

namespace testing {

inline bool near(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(a - b) <= tol;
}

inline bool near_rel(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(a - b) <= tol * std::abs(b);
}

// Fixed seeds keep the property runs reproducible.
inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eed0000ULL + salt); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace testing

#define CHECK_ERROR_CODE(expr, expected)                   \
  do {                                                     \
    bool thrown_ = false;                                  \
    try {                                                  \
      (void)(expr);                                        \
    } catch (const etalab::Error& e_) {                    \
      thrown_ = true;                                      \
      CHECK(e_.code() == etalab::ErrorCode::expected);     \
    }                                                      \
    CHECK_MESSAGE(thrown_, "expected " #expected);         \
  } while (0)
