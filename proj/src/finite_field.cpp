#include "tsl/finite_field.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "tsl/errors.hpp"

namespace tsl {

namespace {

constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

using Poly = std::vector<std::uint64_t>;  // coefficients mod p, low to high

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
  while (nr != 0) {
    std::int64_t qt = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - qt * nt);
    std::tie(r, nr) = std::make_pair(nr, r - qt * nr);
  }
  return static_cast<std::uint64_t>((t % static_cast<std::int64_t>(p) + static_cast<std::int64_t>(p)) %
                                    static_cast<std::int64_t>(p));
}

Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = inv_mod(f.back(), p);
  while (a.size() > df) {
    std::uint64_t c = a.back() * lead_inv % p;
    std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) a[shift + i] = (a[shift + i] + p - c * f[i] % p) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return true;
  // Rabin: x^(p^m) = x mod f, and gcd(x^(p^(m/r)) - x, f) = 1 for primes r | m.
  auto frob_iter = [&](std::size_t k) {
    Poly h{0, 1};
    for (std::size_t i = 0; i < k; ++i) h = poly_powmod(h, p, f, p);
    return h;
  };
  Poly full = frob_iter(m);
  Poly x = poly_mod(Poly{0, 1}, f, p);
  trim(full);
  if (full != x) return false;
  for (auto r : prime_factors(m)) {
    Poly h = frob_iter(m / r);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    Poly g = poly_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

Poly digits_to_poly(std::uint64_t code, std::uint32_t p, std::uint32_t m) {
  Poly out(m, 0);
  for (std::uint32_t i = 0; i < m; ++i) {
    out[i] = code % p;
    code /= p;
  }
  return out;
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
    r *= b;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldPtr Field::make(std::uint32_t p, std::uint32_t m, std::optional<std::vector<std::uint32_t>> modulus,
                     std::uint64_t ceiling) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (m < 1) throw Error(ErrorKind::PreconditionFailed, "extension degree must be at least 1");
  const std::uint64_t q = ipow(p, m);
  if (q > ceiling || q > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::SizeCeilingExceeded,
                "field of size " + std::to_string(p) + "^" + std::to_string(m) + " exceeds ceiling " +
                    std::to_string(ceiling));

  std::shared_ptr<Field> field(new Field());
  field->p_ = p;
  field->m_ = m;
  field->q_ = q;

  if (modulus) {
    const auto& c = *modulus;
    if (c.size() != m + 1 || c.back() % p != 1)
      throw Error(ErrorKind::ReducibleModulus, "modulus must be monic of degree " + std::to_string(m));
    Poly f;
    for (auto x : c) f.push_back(x % p);
    if (!is_irreducible(f, p)) throw Error(ErrorKind::ReducibleModulus, "modulus is reducible over F_p");
    field->modulus_.assign(f.begin(), f.end());
  } else {
    // Count through (c_0, ..., c_{m-1}) with c_0 most significant.
    Poly f(m + 1, 0);
    f[m] = 1;
    bool found = false;
    for (std::uint64_t idx = 0; idx < q && !found; ++idx) {
      std::uint64_t rest = idx;
      for (std::uint32_t i = m; i-- > 0;) {
        f[i] = rest % p;
        rest /= p;
      }
      if (f[0] == 0 && m > 1) continue;
      if (is_irreducible(f, p)) found = true;
    }
    field->modulus_.assign(f.begin(), f.end());
  }
  field->build_tables();
  return field;
}

void Field::build_tables() {
  const std::uint64_t units = q_ - 1;
  Poly f(modulus_.begin(), modulus_.end());

  // Smallest code of multiplicative order q - 1.
  const auto factors = prime_factors(units);
  Code g = 1;
  if (units > 1) {
    for (std::uint64_t c = 2; c < q_; ++c) {
      Poly gp = digits_to_poly(c, p_, m_);
      bool primitive = true;
      for (auto l : factors) {
        Poly h = poly_powmod(gp, units / l, f, p_);
        trim(h);
        if (h.size() == 1 && h[0] == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        g = static_cast<Code>(c);
        break;
      }
    }
  }

  // Power sums of the roots of the modulus give Tr(t^i).
  std::vector<std::uint64_t> tr_basis(m_, 0);
  tr_basis[0] = m_ % p_;
  for (std::uint32_t k = 1; k < m_; ++k) {
    std::uint64_t s = static_cast<std::uint64_t>(k) % p_ * modulus_[m_ - k] % p_;
    for (std::uint32_t j = 1; j < k; ++j) s = (s + modulus_[m_ - j] * tr_basis[k - j]) % p_;
    tr_basis[k] = (p_ - s) % p_;
  }

  exp_.assign(units, 0);
  log_.assign(q_, kNoLog);
  trace_by_log_.assign(units, 0);
  Poly gdig = digits_to_poly(g, p_, m_);
  Poly cur(m_, 0);
  cur[0] = 1;
  for (std::uint64_t k = 0; k < units; ++k) {
    std::uint64_t code = 0, tr = 0;
    for (std::uint32_t i = m_; i-- > 0;) code = code * p_ + cur[i];
    for (std::uint32_t i = 0; i < m_; ++i) tr = (tr + cur[i] * tr_basis[i]) % p_;
    exp_[k] = static_cast<Code>(code);
    log_[code] = static_cast<std::uint32_t>(k);
    trace_by_log_[k] = static_cast<std::uint32_t>(tr);

    // cur <- cur * g, accumulating cur * t^j over the digits of g.
    Poly next(m_, 0), shifted = cur;
    for (std::uint32_t j = 0; j < m_; ++j) {
      if (gdig[j] != 0)
        for (std::uint32_t i = 0; i < m_; ++i) next[i] = (next[i] + gdig[j] * shifted[i]) % p_;
      if (j + 1 < m_) {
        std::uint64_t top = shifted[m_ - 1];
        for (std::uint32_t i = m_ - 1; i > 0; --i) shifted[i] = shifted[i - 1];
        shifted[0] = 0;
        if (top != 0)
          for (std::uint32_t i = 0; i < m_; ++i) shifted[i] = (shifted[i] + p_ - top * modulus_[i] % p_) % p_;
      }
    }
    cur = std::move(next);
  }

  zech_.assign(units, kNoLog);
  for (std::uint64_t k = 0; k < units; ++k) {
    Code c = exp_[k];
    Code d0 = c % p_;
    Code c1 = c - d0 + (d0 + 1) % p_;
    zech_[k] = c1 == 0 ? kNoLog : log_[c1];
  }
}

Code Field::add(Code a, Code b) const {
  if (a == 0) return b;
  if (b == 0) return a;
  if (p_ == 2) return a ^ b;
  const std::uint64_t units = q_ - 1;
  std::uint64_t la = log_[a], lb = log_[b];
  std::uint64_t diff = (lb + units - la) % units;
  std::uint32_t z = zech_[diff];
  if (z == kNoLog) return 0;
  return exp_[(la + z) % units];
}

Code Field::neg(Code a) const {
  if (a == 0 || p_ == 2) return a;
  return exp_[(log_[a] + (q_ - 1) / 2) % (q_ - 1)];
}

Code Field::mul(Code a, Code b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % (q_ - 1)];
}

Code Field::inv(Code a) const {
  if (a == 0) throw Error(ErrorKind::PreconditionFailed, "inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Code Field::pow(Code a, std::int64_t e) const {
  if (a == 0) {
    if (e < 0) throw Error(ErrorKind::PreconditionFailed, "negative power of zero");
    return e == 0 ? 1 : 0;
  }
  const std::int64_t units = static_cast<std::int64_t>(q_ - 1);
  std::int64_t le = static_cast<std::int64_t>(log_[a]) * (((e % units) + units) % units) % units;
  return exp_[static_cast<std::uint64_t>(le)];
}

Code Field::from_integer(std::int64_t c) const {
  const std::int64_t p = p_;
  return static_cast<Code>(((c % p) + p) % p);
}

Code Field::from_coeffs(const std::vector<std::uint32_t>& coeffs) const {
  if (coeffs.size() > m_)
    throw Error(ErrorKind::ParseError, "element has " + std::to_string(coeffs.size()) +
                                           " coordinates, field degree is " + std::to_string(m_));
  std::uint64_t code = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) code = code * p_ + coeffs[i] % p_;
  return static_cast<Code>(code);
}

std::vector<std::uint32_t> Field::coeffs(Code a) const {
  std::vector<std::uint32_t> out(m_);
  for (std::uint32_t i = 0; i < m_; ++i) {
    out[i] = a % p_;
    a /= p_;
  }
  return out;
}

std::string Field::describe() const {
  std::ostringstream os;
  os << "F_" << p_ << "^" << m_ << " mod [";
  for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
  os << "]";
  return os.str();
}

FieldPtr standard_field(std::uint32_t p, std::uint32_t m, std::uint64_t ceiling) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> registry;
  const std::uint64_t q = ipow(p, m);
  if (q > ceiling)
    throw Error(ErrorKind::SizeCeilingExceeded, "field of size " + std::to_string(p) + "^" + std::to_string(m) +
                                                    " exceeds ceiling " + std::to_string(ceiling));
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(p, m);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  auto field = Field::make(p, m, std::nullopt, ceiling);
  registry.emplace(key, field);
  return field;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return {a.field, a.field->add(a.code, b.code)};
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  return {a.field, a.field->sub(a.code, b.code)};
}
FieldElement operator-(const FieldElement& a) { return {a.field, a.field->neg(a.code)}; }
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return {a.field, a.field->mul(a.code, b.code)};
}
bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field == b.field && a.code == b.code;
}

std::uint32_t absolute_trace(const FieldElement& x) { return x.field->absolute_trace(x.code); }

Embedding Embedding::between(const FieldPtr& source, const FieldPtr& target) {
  if (source->characteristic() != target->characteristic() || target->degree() % source->degree() != 0)
    throw Error(ErrorKind::PreconditionFailed, "no embedding " + source->describe() + " -> " + target->describe());
  const auto& f = source->modulus();
  auto eval = [&](Code y) {
    Code acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = target->add(target->mul(acc, y), target->from_integer(f[i]));
    return acc;
  };
  std::vector<Code> candidates{0};
  const std::uint64_t small_units = source->size() - 1;
  const std::uint64_t step = target->unit_order() / small_units;
  for (std::uint64_t k = 0; k < small_units; ++k) candidates.push_back(target->exp(k * step));
  std::optional<Code> best;
  for (Code y : candidates) {
    if (eval(y) != 0) continue;
    if (!best || target->coeffs(y) < target->coeffs(*best)) best = y;
  }
  if (!best) throw Error(ErrorKind::PreconditionFailed, "modulus has no root in target field");

  Embedding e;
  e.source_ = source;
  e.target_ = target;
  Code power = 1;
  for (std::uint32_t i = 0; i < source->degree(); ++i) {
    e.basis_images_.push_back(power);
    power = target->mul(power, *best);
  }
  return e;
}

Code Embedding::operator()(Code a) const {
  const auto digits = source_->coeffs(a);
  Code acc = 0;
  for (std::size_t i = 0; i < digits.size(); ++i)
    if (digits[i] != 0) acc = target_->add(acc, target_->mul(target_->from_integer(digits[i]), basis_images_[i]));
  return acc;
}

std::uint64_t closed_point_count(std::uint64_t q, std::uint32_t d) {
  auto mobius = [](std::uint32_t n) {
    int sign = 1;
    for (std::uint32_t k = 2; k * k <= n; ++k) {
      if (n % k == 0) {
        n /= k;
        if (n % k == 0) return 0;
        sign = -sign;
      }
    }
    if (n > 1) sign = -sign;
    return sign;
  };
  std::int64_t total = 0;
  for (std::uint32_t e = 1; e <= d; ++e)
    if (d % e == 0) total += mobius(d / e) * (static_cast<std::int64_t>(ipow(q, e)) - 1);
  return static_cast<std::uint64_t>(total / d);
}

namespace {

// Orbit of a unit log under k -> k*q, as logs.
std::vector<std::uint64_t> log_orbit(std::uint64_t k, std::uint64_t q, std::uint64_t units) {
  std::vector<std::uint64_t> orbit{k};
  for (std::uint64_t j = k * q % units; j != k; j = j * q % units) orbit.push_back(j);
  return orbit;
}

}  // namespace

std::vector<ClosedPoint> closed_points(const FieldPtr& base, std::uint32_t d_max, std::uint64_t ceiling) {
  const std::uint64_t q = base->size();
  if (d_max > 0 && ipow(q, d_max) > ceiling)
    throw Error(ErrorKind::SizeCeilingExceeded, "q^d_max = " + std::to_string(q) + "^" + std::to_string(d_max) +
                                                    " exceeds ceiling " + std::to_string(ceiling));
  std::vector<ClosedPoint> out;
  for (std::uint32_t d = 1; d <= d_max; ++d) {
    auto K = standard_field(base->characteristic(), base->degree() * d, ceiling);
    auto emb = Embedding::between(base, K);
    const std::uint64_t units = K->unit_order();
    std::vector<bool> seen(units, false);
    std::vector<ClosedPoint> level;
    for (std::uint64_t k = 0; k < units; ++k) {
      if (seen[k]) continue;
      auto orbit = log_orbit(k, q, units);
      Code rep = std::numeric_limits<Code>::max();
      for (auto j : orbit) {
        seen[j] = true;
        rep = std::min(rep, K->exp(j));
      }
      if (orbit.size() == d) level.push_back(ClosedPoint{FieldElement{K, rep}, d, emb});
    }
    std::sort(level.begin(), level.end(),
              [](const ClosedPoint& a, const ClosedPoint& b) { return a.representative.code < b.representative.code; });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

ClosedPoint closed_point_of(const FieldPtr& base, const FieldElement& x, std::uint64_t ceiling) {
  const auto& L = x.field;
  if (x.is_zero()) throw Error(ErrorKind::PreconditionFailed, "zero is not a point of G_m");
  if (L->characteristic() != base->characteristic() || L->degree() % base->degree() != 0)
    throw Error(ErrorKind::PreconditionFailed, "element does not lie in an extension of the base field");
  const std::uint64_t q = base->size();
  auto orbit = log_orbit(L->log(x.code), q, L->unit_order());
  const auto d = static_cast<std::uint32_t>(orbit.size());
  std::set<Code> orbit_codes;
  for (auto j : orbit) orbit_codes.insert(L->exp(j));

  auto K = standard_field(base->characteristic(), base->degree() * d, ceiling);
  auto into_L = Embedding::between(K, L);
  Code rep = std::numeric_limits<Code>::max();
  for (std::uint64_t k = 0; k < K->unit_order(); ++k) {
    Code y = K->exp(k);
    if (orbit_codes.count(into_L(y))) rep = std::min(rep, y);
  }
  return ClosedPoint{FieldElement{K, rep}, d, Embedding::between(base, K)};
}

std::optional<std::uint64_t> torus_size(std::uint64_t q, std::size_t n) {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (q - 1 != 0 && s > std::numeric_limits<std::uint64_t>::max() / (q - 1)) return std::nullopt;
    s *= q - 1;
  }
  return s;
}

void require_torus_within(std::uint64_t q, std::size_t n, std::uint64_t ceiling) {
  auto s = torus_size(q, n);
  if (!s || *s > ceiling)
    throw Error(ErrorKind::SizeCeilingExceeded, "torus (" + std::to_string(q) + " - 1)^" + std::to_string(n) +
                                                    " exceeds ceiling " + std::to_string(ceiling));
}

Torus::Torus(FieldPtr field, std::size_t n, std::uint64_t ceiling) : field_(std::move(field)), n_(n) {
  require_torus_within(field_->size(), n_, ceiling);
  size_ = *torus_size(field_->size(), n_);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> Torus::chunks(std::size_t count) const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  if (count == 0) count = 1;
  const std::uint64_t step = (size_ + count - 1) / count;
  for (std::uint64_t b = 0; b < size_; b += step) out.emplace_back(b, std::min(size_, b + step));
  return out;
}

}  // namespace tsl
