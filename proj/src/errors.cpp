#include "capk/errors.hpp"

namespace capk {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InternalOverflow: return "InternalOverflow";
    case ErrorKind::IllFormedHom: return "IllFormedHom";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorKind::NotEquivariant: return "NotEquivariant";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::IndexDivisor: return "IndexDivisor";
    case ErrorKind::NotSmooth: return "NotSmooth";
    case ErrorKind::WitnessMismatch: return "WitnessMismatch";
    case ErrorKind::CoverageGap: return "CoverageGap";
    case ErrorKind::SaturationViolation: return "SaturationViolation";
    case ErrorKind::SolveFailure: return "SolveFailure";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::RecoveryFailure: return "RecoveryFailure";
    case ErrorKind::NotAnNthPower: return "NotAnNthPower";
    case ErrorKind::ResolventDegenerate: return "ResolventDegenerate";
    case ErrorKind::ExactnessFailure: return "ExactnessFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace capk
