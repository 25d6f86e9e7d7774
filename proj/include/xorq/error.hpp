#pragma once

#include <stdexcept>
#include <string>

namespace xorq {

enum class ErrorKind {
  NotHermitian,
  NotSquare,
  DimensionMismatch,
  BadPermutation,
  NotAPermutation,
  PreconditionViolated,
  TraceNormExceeded,
  ZeroGame,
  TooLarge,
  BadArgs,
  ParseError,
  Infeasible,
  Unbounded,
  MaxIterations,
  NumericalFailure,
};

const char *error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace xorq
