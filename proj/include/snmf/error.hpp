#ifndef SNMF_ERROR_HPP
#define SNMF_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace snmf {

enum class ErrorCode {
  DimensionMismatch,
  NotPositiveDefinite,
  NonFinite,
  InvalidMatrix,
  TooFewPoints,
  DegenerateScale,
  IsolatedVertex,
  InvalidK,
  InvalidConfig,
  LengthMismatch,
  ParseError,
  RaggedRows,
  AsymmetricConflict,
  NegativeWeight,
  IndexOutOfRange,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and tests)
// can branch on the kind of failure without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace snmf

#endif  // SNMF_ERROR_HPP
