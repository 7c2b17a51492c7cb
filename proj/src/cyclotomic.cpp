#include "tsl/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "tsl/errors.hpp"
#include "tsl/finite_field.hpp"

namespace tsl {

Cyclotomic::Cyclotomic(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  c_.assign(p - 1, Rational(0));
}

Cyclotomic::Cyclotomic(std::uint32_t p, const Rational& value) : Cyclotomic(p) { c_[0] = value; }

Cyclotomic Cyclotomic::zeta_power(std::uint32_t p, std::int64_t k) {
  std::vector<Rational> powers(p, Rational(0));
  const std::int64_t pp = p;
  powers[static_cast<std::size_t>(((k % pp) + pp) % pp)] = 1;
  return from_powers(p, powers);
}

Cyclotomic Cyclotomic::from_counts(std::uint32_t p, std::span<const std::int64_t> counts) {
  std::vector<Rational> powers(counts.begin(), counts.end());
  return from_powers(p, powers);
}

Cyclotomic Cyclotomic::from_powers(std::uint32_t p, const std::vector<Rational>& coeffs) {
  Cyclotomic out(p);
  std::vector<Rational> folded(p, Rational(0));
  for (std::size_t i = 0; i < coeffs.size(); ++i) folded[i % p] += coeffs[i];
  // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2}).
  for (std::uint32_t i = 0; i + 1 < p; ++i) out.c_[i] = folded[i] - folded[p - 1];
  return out;
}

bool Cyclotomic::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x == 0; });
}

bool Cyclotomic::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return denominator_of(x) == 1; });
}

std::optional<Rational> Cyclotomic::as_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return std::nullopt;
  return c_.empty() ? Rational(0) : c_[0];
}

Cyclotomic Cyclotomic::galois(std::int64_t c) const {
  const std::int64_t pp = p_;
  const std::int64_t cc = ((c % pp) + pp) % pp;
  if (cc == 0) throw Error(ErrorKind::PreconditionFailed, "Galois twist must be a unit mod p");
  std::vector<Rational> powers(p_, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) powers[static_cast<std::size_t>(cc * static_cast<std::int64_t>(i) % pp)] += c_[i];
  return from_powers(p_, powers);
}

void Cyclotomic::check_same(const Cyclotomic& o) const {
  if (p_ != o.p_)
    throw Error(ErrorKind::MixedPrimes, "cannot combine Q(zeta_" + std::to_string(p_) + ") with Q(zeta_" +
                                            std::to_string(o.p_) + ")");
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  check_same(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  check_same(o);
  std::vector<Rational> powers(p_, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j] != 0) powers[(i + j) % p_] += c_[i] * o.c_[j];
  }
  *this = from_powers(p_, powers);
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rational& r) {
  for (auto& x : c_) x *= r;
  return *this;
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

std::string Cyclotomic::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << tsl::to_string(c_[i]);
    if (i == 1) os << "*z";
    if (i > 1) os << "*z^" << i;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

int valuation_of_integer(Integer z, std::uint32_t p) {
  int k = 0;
  if (z == 0) return 0;
  while (z % p == 0) {
    z /= p;
    ++k;
  }
  return k;
}

// (1 - zeta)^{-1} = (1/p) * prod_{j=2}^{p-1} (1 - zeta^j).
const Cyclotomic& inverse_of_uniformizer(std::uint32_t p) {
  static std::mutex mutex;
  static std::map<std::uint32_t, Cyclotomic> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  Cyclotomic acc(p, Rational(1));
  for (std::uint32_t j = 2; j < p; ++j) acc *= Cyclotomic(p, Rational(1)) - Cyclotomic::zeta_power(p, j);
  acc *= Rational(1, p);
  return cache.emplace(p, acc).first->second;
}

}  // namespace

Valuation ord_p(const Cyclotomic& x) {
  if (x.is_zero()) return std::nullopt;
  const std::uint32_t p = x.prime();
  Integer den = 1;
  for (const auto& c : x.coeffs()) den = lcm(den, denominator_of(c));
  Integer content = 0;
  for (const auto& c : x.coeffs()) content = gcd(content, numerator_of(c) * (den / denominator_of(c)));
  // Scale to a primitive integral vector; p itself has (1-zeta)-valuation p - 1.
  std::int64_t k = static_cast<std::int64_t>(p - 1) *
                   (valuation_of_integer(content, p) - valuation_of_integer(den, p));
  Cyclotomic z = x * Rational(den, content);
  const auto& inv = inverse_of_uniformizer(p);
  // The residue map Z[zeta] -> Z[zeta]/(1 - zeta) = F_p sends zeta to 1.
  for (;;) {
    Integer residue = 0;
    for (const auto& c : z.coeffs()) residue += numerator_of(c);
    if (residue % p != 0) break;
    z *= inv;
    if (!z.is_integral()) throw Error(ErrorKind::PreconditionFailed, "division by 1 - zeta left Z[zeta]");
    ++k;
  }
  return Rational(k, p - 1);
}

namespace {

std::uint32_t series_prime(const Series& s) {
  for (const auto& c : s)
    if (c.prime() != 0) return c.prime();
  throw Error(ErrorKind::PreconditionFailed, "empty series");
}

Cyclotomic coeff_or_zero(const Series& s, std::size_t k, std::uint32_t p) {
  return k < s.size() ? s[k] : Cyclotomic(p);
}

}  // namespace

Series series_exp(const Series& s, std::size_t order) {
  const auto p = series_prime(s);
  if (!s.empty() && !s[0].is_zero()) throw Error(ErrorKind::BadConstantTerm, "exp needs constant term 0");
  Series e(order + 1, Cyclotomic(p));
  e[0] = Cyclotomic(p, Rational(1));
  // k E_k = sum_{j=1}^{k} j s_j E_{k-j}.
  for (std::size_t k = 1; k <= order; ++k) {
    Cyclotomic acc(p);
    for (std::size_t j = 1; j <= k; ++j) {
      auto sj = coeff_or_zero(s, j, p);
      if (sj.is_zero()) continue;
      acc += sj * e[k - j] * Rational(static_cast<std::int64_t>(j));
    }
    e[k] = acc * Rational(1, static_cast<std::int64_t>(k));
  }
  return e;
}

Series series_log(const Series& s, std::size_t order) {
  const auto p = series_prime(s);
  if (s.empty() || s[0] != Cyclotomic(p, Rational(1)))
    throw Error(ErrorKind::BadConstantTerm, "log needs constant term 1");
  Series l(order + 1, Cyclotomic(p));
  // k L_k = k s_k - sum_{j=1}^{k-1} j L_j s_{k-j}.
  for (std::size_t k = 1; k <= order; ++k) {
    Cyclotomic acc = coeff_or_zero(s, k, p) * Rational(static_cast<std::int64_t>(k));
    for (std::size_t j = 1; j < k; ++j) {
      auto skj = coeff_or_zero(s, k - j, p);
      if (skj.is_zero() || l[j].is_zero()) continue;
      acc -= l[j] * skj * Rational(static_cast<std::int64_t>(j));
    }
    l[k] = acc * Rational(1, static_cast<std::int64_t>(k));
  }
  return l;
}

Series series_mul(const Series& a, const Series& b, std::size_t order) {
  const auto p = series_prime(a);
  Series out(order + 1, Cyclotomic(p));
  for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= order; ++j)
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series series_inverse(const Series& s, std::size_t order) {
  const auto p = series_prime(s);
  if (s.empty() || s[0] != Cyclotomic(p, Rational(1)))
    throw Error(ErrorKind::BadConstantTerm, "inverse needs constant term 1");
  Series out(order + 1, Cyclotomic(p));
  out[0] = Cyclotomic(p, Rational(1));
  for (std::size_t k = 1; k <= order; ++k) {
    Cyclotomic acc(p);
    for (std::size_t j = 1; j <= k && j < s.size(); ++j)
      if (!s[j].is_zero()) acc -= s[j] * out[k - j];
    out[k] = acc;
  }
  return out;
}

namespace {

using Point = std::pair<Rational, Rational>;

Rational cross(const Point& o, const Point& a, const Point& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

NewtonPolygon hull(const std::vector<Point>& pts) {
  std::vector<Point> h;
  for (const auto& pt : pts) {
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), pt) <= 0) h.pop_back();
    h.push_back(pt);
  }
  NewtonPolygon poly;
  poly.vertices = h;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    Rational width = h[i + 1].first - h[i].first;
    Rational slope = (h[i + 1].second - h[i].second) / width;
    for (Integer k = 0; k < numerator_of(width); ++k) poly.slopes.push_back(slope);
  }
  return poly;
}

}  // namespace

NewtonPolygon NewtonPolygon::from_slopes(std::vector<Rational> slopes) {
  std::sort(slopes.begin(), slopes.end());
  std::vector<Point> pts{{Rational(0), Rational(0)}};
  Rational y = 0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    y += slopes[i];
    pts.emplace_back(Rational(static_cast<std::int64_t>(i + 1)), y);
  }
  return hull(pts);
}

Rational NewtonPolygon::length() const {
  if (vertices.empty()) return 0;
  return vertices.back().first - vertices.front().first;
}

Rational NewtonPolygon::height_at(const Rational& x) const {
  if (vertices.empty()) throw Error(ErrorKind::ZeroPolynomial, "empty polygon");
  if (x <= vertices.front().first) return vertices.front().second;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto& [x0, y0] = vertices[i];
    const auto& [x1, y1] = vertices[i + 1];
    if (x <= x1) return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }
  return vertices.back().second;
}

NewtonPolygon newton_polygon(std::span<const Cyclotomic> coeffs, const Rational& ord_unit) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    auto v = ord_p(coeffs[i]);
    if (v) pts.emplace_back(Rational(static_cast<std::int64_t>(i)), *v / ord_unit);
  }
  if (pts.empty()) throw Error(ErrorKind::ZeroPolynomial, "Newton polygon of the zero polynomial");
  return hull(pts);
}

bool polygon_dominates(const NewtonPolygon& upper, const NewtonPolygon& lower) {
  if (upper.vertices.empty() || lower.vertices.empty())
    throw Error(ErrorKind::ZeroPolynomial, "empty polygon");
  if (upper.vertices.front().first != lower.vertices.front().first || upper.length() != lower.length())
    throw Error(ErrorKind::LengthMismatch, "polygons have different horizontal extents");
  // Both are piecewise linear, so comparing at the union of breakpoints suffices.
  for (const auto& [x, y] : upper.vertices)
    if (y < lower.height_at(x)) return false;
  for (const auto& [x, y] : lower.vertices)
    if (upper.height_at(x) < y) return false;
  return true;
}

}  // namespace tsl
