#include "rpca/error.hpp"

namespace rpca {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MaskNotBinary: return "MaskNotBinary";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::MissingL0: return "MissingL0";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::ShapeOverflow: return "ShapeOverflow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rpca
