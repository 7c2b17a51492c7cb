#include "tsl/rational.hpp"

#include <stdexcept>

#include "tsl/errors.hpp"

namespace tsl {

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

std::string to_string(const Integer& z) { return z.str(); }

std::string to_string(const Rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(Integer(text));
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "not a rational number: '" + text + "'");
  }
}

QVec to_qvec(const IVec& v) {
  QVec out;
  out.reserve(v.size());
  for (auto x : v) out.emplace_back(x);
  return out;
}

Rational dot(const QVec& a, const QVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const QVec& a, const IVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::int64_t dot(const IVec& a, const IVec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IVec primitive_integral(const QVec& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, denominator_of(x));
  std::vector<Integer> ints;
  Integer g = 0;
  for (const auto& x : v) {
    Integer z = numerator_of(x) * (den / denominator_of(x));
    g = gcd(g, z);
    ints.push_back(z);
  }
  IVec out;
  for (auto& z : ints) out.push_back(g == 0 ? 0 : static_cast<std::int64_t>(z / g));
  return out;
}

namespace {

// Reduces rows in place to row echelon form; returns the rank and the
// product of pivots with sign (determinant contribution).
std::size_t echelon(std::vector<QVec>& rows, Rational* det) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  if (det) *det = 1;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) {
      if (det) *det = 0;
      continue;
    }
    if (piv != r) {
      std::swap(rows[piv], rows[r]);
      if (det) *det = -*det;
    }
    if (det) *det *= rows[r][c];
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      Rational f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank(std::vector<QVec> rows) { return echelon(rows, nullptr); }

Rational determinant(std::vector<QVec> rows) {
  if (rows.empty()) return 1;
  Rational det;
  std::size_t r = echelon(rows, &det);
  return r == rows.size() ? det : Rational(0);
}

std::optional<QVec> solve_unique(std::vector<QVec> rows, QVec rhs) {
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].push_back(rhs[i]);
  // Gauss-Jordan on the augmented matrix.
  std::size_t r = 0;
  std::vector<std::size_t> pivcol;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = c; j <= n; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (rows[i][n] != 0) return std::nullopt;
  if (r < n) return std::nullopt;
  QVec x(n);
  for (std::size_t i = 0; i < r; ++i) x[pivcol[i]] = rows[i][n];
  return x;
}

}  // namespace tsl
