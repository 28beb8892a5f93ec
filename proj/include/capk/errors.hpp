#pragma once

#include <stdexcept>
#include <string>

namespace capk {

// Every failure carries a kind so the CLI can map it to an exit code.
enum class ErrorKind {
  InternalOverflow,
  IllFormedHom,
  NotComposable,
  DegreeOutOfRange,
  NotEquivariant,
  DivisionByZero,
  NotPrime,
  IndexDivisor,
  NotSmooth,
  WitnessMismatch,
  CoverageGap,
  SaturationViolation,
  SolveFailure,
  NotAUnit,
  RecoveryFailure,
  NotAnNthPower,
  ResolventDegenerate,
  ExactnessFailure,
  ParseError,
  ValidationError,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace capk
