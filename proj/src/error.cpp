#include "sfq/error.hpp"

namespace sfq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::PeriodTooShort: return "PeriodTooShort";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonIntegerPixelCount: return "NonIntegerPixelCount";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sfq
