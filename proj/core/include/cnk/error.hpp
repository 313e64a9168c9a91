#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cnk {

enum class ErrorCode {
  DegenerateState,
  EmptySet,
  AllWeightsZero,
  ZeroGradient,
  FactorizationFailure,
  DimensionMismatch,
  ParseError,
  InvalidEta,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the LIBSVM reader; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cnk
