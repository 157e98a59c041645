#pragma once

#include <stdexcept>
#include <string>

namespace rpca {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  MaskNotBinary,
  RankDeficient,
  ConvergenceFailure,
  MissingL0,
  DimensionOverflow,
  ZeroReference,
  TooSmall,
  DegenerateInput,
  BadMagic,
  ShapeOverflow,
  ParseError,
  DimensionMismatch,
  UnsupportedFormat,
  IoError,
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

}  // namespace rpca
