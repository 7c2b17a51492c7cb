#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsl/rational.hpp"

namespace tsl {

/// An element of Q(zeta_p) in the basis 1, zeta, ..., zeta^{p-2}.
class Cyclotomic {
 public:
  Cyclotomic() = default;
  explicit Cyclotomic(std::uint32_t p);
  Cyclotomic(std::uint32_t p, const Rational& value);

  static Cyclotomic zeta_power(std::uint32_t p, std::int64_t k);
  /// sum_t counts[t] * zeta^t for t in [0, p).
  static Cyclotomic from_counts(std::uint32_t p, std::span<const std::int64_t> counts);
  /// Builds from any coefficient list on 1, zeta, zeta^2, ... (reduced mod Phi_p).
  static Cyclotomic from_powers(std::uint32_t p, const std::vector<Rational>& coeffs);

  std::uint32_t prime() const { return p_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_integral() const;
  /// The rational value when the element lies in Q.
  std::optional<Rational> as_rational() const;

  /// The automorphism zeta -> zeta^c.
  Cyclotomic galois(std::int64_t c) const;

  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Rational& r);

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Rational& r) { return a *= r; }
  friend Cyclotomic operator*(const Rational& r, Cyclotomic a) { return a *= r; }
  Cyclotomic operator-() const;
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);

  std::string to_string() const;

 private:
  void check_same(const Cyclotomic& o) const;

  std::uint32_t p_ = 0;
  std::vector<Rational> c_;
};

/// ord_p with ord_p(p) = 1; nullopt stands for +infinity (the zero element).
using Valuation = std::optional<Rational>;

Valuation ord_p(const Cyclotomic& x);

/// Truncated power series sum_{k <= order} a_k T^k.
using Series = std::vector<Cyclotomic>;

/// exp of a series with zero constant term, to T^order.
Series series_exp(const Series& s, std::size_t order);
/// log of a series with constant term 1, to T^order.
Series series_log(const Series& s, std::size_t order);
Series series_mul(const Series& a, const Series& b, std::size_t order);
/// 1 / s for s with constant term 1.
Series series_inverse(const Series& s, std::size_t order);

struct NewtonPolygon {
  std::vector<std::pair<Rational, Rational>> vertices;
  std::vector<Rational> slopes;  // nondecreasing, one per unit of horizontal length

  /// The polygon starting at (0, 0) with the given slope multiset.
  static NewtonPolygon from_slopes(std::vector<Rational> slopes);
  Rational length() const;
  /// Height of the polygon at horizontal position x (linear interpolation).
  Rational height_at(const Rational& x) const;
};

/// Lower convex hull of (i, ord_p(a_i) / ord_unit).
NewtonPolygon newton_polygon(std::span<const Cyclotomic> coeffs, const Rational& ord_unit);

/// True iff every vertex of each polygon is consistent with upper >= lower on
/// the shared horizontal range.
bool polygon_dominates(const NewtonPolygon& upper, const NewtonPolygon& lower);

}  // namespace tsl
