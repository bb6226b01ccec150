#pragma once

#include <stdexcept>
#include <string>

namespace chordal_sdp {

enum class ErrorCode {
  kParseError,
  kIndexOutOfBlock,
  kDuplicateEntry,
  kPatternViolation,
  kAsymmetricData,
  kNotChordal,
  kEigenFailure,
  kRankDeficient,
  kNotFactored,
  kInstanceTooLarge,
  kInvalidArgument,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; callers switch on
// code() when they need to distinguish them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(ErrorCode code, int line, const std::string& what)
      : Error(code, "line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace chordal_sdp
