#include "tsl/errors.hpp"

namespace tsl {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::SizeCeilingExceeded: return "SizeCeilingExceeded";
    case ErrorKind::MixedPrimes: return "MixedPrimes";
    case ErrorKind::BadConstantTerm: return "BadConstantTerm";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotQuasihomogeneous: return "NotQuasihomogeneous";
    case ErrorKind::NotFullDimensional: return "NotFullDimensional";
    case ErrorKind::MuOnFacet: return "MuOnFacet";
    case ErrorKind::OutsideCone: return "OutsideCone";
    case ErrorKind::OutsideMonoid: return "OutsideMonoid";
    case ErrorKind::NotLowerOrder: return "NotLowerOrder";
    case ErrorKind::ExcludedCase: return "ExcludedCase";
    case ErrorKind::AboveNotInterior: return "AboveNotInterior";
    case ErrorKind::LowerOrderCase: return "LowerOrderCase";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::TheoremViolation: return "TheoremViolation";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::PolynomialityFailure: return "PolynomialityFailure";
    case ErrorKind::CrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace tsl
