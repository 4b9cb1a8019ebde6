#pragma once

#include <stdexcept>
#include <string>

namespace etalab {

enum class ErrorCode {
  InvalidArgument,
  AccuracyUnreachable,  // oracle cannot certify the requested error
  DenominatorPole,      // 1 - 2^(1-s) vanishes
  PoleError,            // Gamma at a non-positive integer
  AngleTooLarge,        // turn angle not yet acute at this index
  WindowExhausted,      // no stable run found below the scan ceiling
  ZeroDenominator,      // a partial sum or eta value is indistinguishable from zero
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AccuracyUnreachable: return "AccuracyUnreachable";
    case ErrorCode::DenominatorPole: return "DenominatorPole";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::AngleTooLarge: return "AngleTooLarge";
    case ErrorCode::WindowExhausted: return "WindowExhausted";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace etalab
