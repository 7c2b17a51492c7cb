#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsl {

enum class ErrorKind {
  NotPrime,
  ReducibleModulus,
  SizeCeilingExceeded,
  MixedPrimes,
  BadConstantTerm,
  ZeroPolynomial,
  LengthMismatch,
  NotQuasihomogeneous,
  NotFullDimensional,
  MuOnFacet,
  OutsideCone,
  OutsideMonoid,
  NotLowerOrder,
  ExcludedCase,
  AboveNotInterior,
  LowerOrderCase,
  PreconditionFailed,
  TheoremViolation,
  RankMismatch,
  PolynomialityFailure,
  CrossCheckMismatch,
  ParseError,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tsl
