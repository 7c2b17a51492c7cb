#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace tsl {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Exponent vectors and primitive integral forms.
using IVec = std::vector<std::int64_t>;
/// Rational linear forms and points.
using QVec = std::vector<Rational>;

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);
Rational parse_rational(const std::string& text);

QVec to_qvec(const IVec& v);
Rational dot(const QVec& a, const QVec& b);
Rational dot(const QVec& a, const IVec& b);
std::int64_t dot(const IVec& a, const IVec& b);

/// Scales a rational vector to the primitive integral vector on the same ray.
IVec primitive_integral(const QVec& v);

/// Rank of a rational matrix given by rows.
std::size_t rank(std::vector<QVec> rows);

/// Determinant of a square rational matrix given by rows.
Rational determinant(std::vector<QVec> rows);

/// The unique solution of A x = b, or nullopt when the system is inconsistent
/// or underdetermined.
std::optional<QVec> solve_unique(std::vector<QVec> rows, QVec rhs);

}  // namespace tsl
