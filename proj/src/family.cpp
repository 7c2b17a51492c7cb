#include "tsl/family.hpp"

#include <cstdio>
#include <sstream>

#include "tsl/errors.hpp"

namespace tsl {

Family Family::build(LaurentPolynomial f, IVec mu, std::int64_t M, std::uint64_t ceiling) {
  if (f.is_zero()) throw Error(ErrorKind::PreconditionFailed, "f is the zero polynomial");
  if (M < 1) throw Error(ErrorKind::PreconditionFailed, "deformation exponent must be positive");
  Family fam(GeometryContext::build(f.support(), mu, ceiling));
  fam.f_ = std::move(f);
  fam.mu_ = std::move(mu);
  fam.M_ = M;
  return fam;
}

std::int64_t Family::lambda_exponent() const {
  return geometry_.deformation_case() == DeformationCase::Below ? M_ : -M_;
}

std::string Family::canonical_text() const {
  std::ostringstream os;
  const auto& F = *f_.field();
  os << "p=" << F.characteristic() << ";m=" << F.degree() << ";modulus=";
  for (auto c : F.modulus()) os << c << ",";
  os << ";f=";
  for (const auto& [v, c] : f_.terms()) {
    os << "[";
    for (auto x : v) os << x << ",";
    os << ":" << c << "]";
  }
  os << ";mu=";
  for (auto x : mu_) os << x << ",";
  os << ";M=" << M_;
  return os.str();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Family::hash() const { return fnv1a_hex(canonical_text()); }

LaurentPolynomial Family::zero_fiber(const Embedding& base_to_field) const {
  if (base_to_field.source() != f_.field())
    throw Error(ErrorKind::PreconditionFailed, "embedding does not start at the base field");
  LaurentPolynomial out(base_to_field.target(), dimension());
  for (const auto& [v, c] : f_.terms()) out.add_term(v, base_to_field(c));
  return out;
}

LaurentPolynomial Family::fiber(const Embedding& base_to_field, Code lambda) const {
  if (lambda == 0) throw Error(ErrorKind::PreconditionFailed, "lambda must be nonzero");
  auto out = zero_fiber(base_to_field);
  const auto& K = base_to_field.target();
  out.add_term(mu_, K->pow(lambda, lambda_exponent()));
  return out;
}

LaurentPolynomial Family::fiber(const ClosedPoint& point) const {
  return fiber(point.base_embedding, point.representative.code);
}

}  // namespace tsl
