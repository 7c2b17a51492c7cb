#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tsl/finite_field.hpp"
#include "tsl/lattice_geometry.hpp"

namespace tsl {

/// The one-parameter family f(x) + Lambda^{+-M} x^mu over the base field of f,
/// with the sign fixed by the geometry (+ when l(mu) < 1, - when l(mu) > 1).
class Family {
 public:
  static Family build(LaurentPolynomial f, IVec mu, std::int64_t M = 1, std::uint64_t ceiling = kDefaultCeiling);

  const LaurentPolynomial& f() const { return f_; }
  const IVec& mu() const { return mu_; }
  std::int64_t deformation_exponent() const { return M_; }
  const GeometryContext& geometry() const { return geometry_; }
  const FieldPtr& base_field() const { return f_.field(); }
  std::size_t dimension() const { return mu_.size(); }
  /// Exponent of lambda on x^mu: M below, -M above.
  std::int64_t lambda_exponent() const;

  /// Canonical text identifying field, f, mu and M.
  std::string canonical_text() const;
  /// FNV-1a of canonical_text() as 16 hex digits.
  std::string hash() const;

  /// F(lambda, x) over the field of `lambda`, with f pushed through `base_to_field`.
  LaurentPolynomial fiber(const Embedding& base_to_field, Code lambda) const;
  LaurentPolynomial fiber(const ClosedPoint& point) const;
  /// f(x) alone over the field of the embedding (the fiber at lambda = 0).
  LaurentPolynomial zero_fiber(const Embedding& base_to_field) const;

 private:
  LaurentPolynomial f_;
  IVec mu_;
  std::int64_t M_ = 1;
  GeometryContext geometry_;
  explicit Family(GeometryContext g) : geometry_(std::move(g)) {}
};

std::string fnv1a_hex(const std::string& text);

}  // namespace tsl
