#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tsl {

inline constexpr std::uint64_t kDefaultCeiling = 10'000'000;

/// An element of a finite field, packed as the integer sum of c_i * p^i where
/// c_0..c_{m-1} are its coordinates in the power basis of the modulus.
using Code = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// F_{p^m} with full log/antilog tables. Immutable once built, so a single
/// instance can be shared between threads.
class Field {
 public:
  /// Builds F_{p^m}. Without an explicit modulus the lexicographically
  /// smallest monic irreducible (comparing c_0 first) is chosen.
  static FieldPtr make(std::uint32_t p, std::uint32_t m,
                       std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                       std::uint64_t ceiling = kDefaultCeiling);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return m_; }
  std::uint64_t size() const { return q_; }
  std::uint64_t unit_order() const { return q_ - 1; }
  /// Monic modulus, coefficients low to high (length m + 1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Code zero() const { return 0; }
  Code one() const { return 1; }
  /// The primitive element used for the log tables.
  Code generator() const { return exp_.size() > 1 ? exp_[1] : 1; }

  Code add(Code a, Code b) const;
  Code neg(Code a) const;
  Code sub(Code a, Code b) const { return add(a, neg(b)); }
  Code mul(Code a, Code b) const;
  Code inv(Code a) const;
  Code pow(Code a, std::int64_t e) const;
  Code frobenius(Code a) const { return pow(a, p_); }
  /// Image of the integer c under Z -> F_p -> F.
  Code from_integer(std::int64_t c) const;

  Code from_coeffs(const std::vector<std::uint32_t>& coeffs) const;
  std::vector<std::uint32_t> coeffs(Code a) const;

  /// Discrete log of a nonzero element with respect to generator().
  std::uint32_t log(Code a) const { return log_[a]; }
  Code exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }

  /// Tr_{F/F_p}(a) as an integer in [0, p).
  std::uint32_t absolute_trace(Code a) const { return a == 0 ? 0 : trace_by_log_[log_[a]]; }
  /// trace_by_log()[k] = Tr(g^k).
  const std::vector<std::uint32_t>& trace_by_log() const { return trace_by_log_; }

  std::string describe() const;

 private:
  Field() = default;
  void build_tables();

  std::uint32_t p_ = 0;
  std::uint32_t m_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<Code> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;  // log(1 + g^k), or kNoLog when 1 + g^k = 0
  std::vector<std::uint32_t> trace_by_log_;
};

inline FieldPtr make_field(std::uint32_t p, std::uint32_t m,
                           std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                           std::uint64_t ceiling = kDefaultCeiling) {
  return Field::make(p, m, std::move(modulus), ceiling);
}

/// Shared default-modulus field F_{p^m} from a process-wide registry.
FieldPtr standard_field(std::uint32_t p, std::uint32_t m, std::uint64_t ceiling = kDefaultCeiling);

bool is_prime(std::uint64_t n);

/// Value type pairing a code with its field.
struct FieldElement {
  FieldPtr field;
  Code code = 0;

  std::vector<std::uint32_t> coeffs() const { return field->coeffs(code); }
  bool is_zero() const { return code == 0; }
  FieldElement pow(std::int64_t e) const { return {field, field->pow(code, e)}; }
  FieldElement inverse() const { return {field, field->inv(code)}; }
};

FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a);
FieldElement operator*(const FieldElement& a, const FieldElement& b);
bool operator==(const FieldElement& a, const FieldElement& b);

std::uint32_t absolute_trace(const FieldElement& x);

/// Field embedding determined by the image of the generator t of the source
/// power basis.
class Embedding {
 public:
  Embedding() = default;
  /// Chooses the root of the source modulus in the target whose coordinate
  /// vector is lexicographically smallest.
  static Embedding between(const FieldPtr& source, const FieldPtr& target);

  Code operator()(Code a) const;
  const FieldPtr& source() const { return source_; }
  const FieldPtr& target() const { return target_; }
  Code image_of_generator() const { return basis_images_.size() > 1 ? basis_images_[1] : 0; }

 private:
  FieldPtr source_;
  FieldPtr target_;
  std::vector<Code> basis_images_;  // images of t^0 .. t^{m-1}
};

/// A Frobenius orbit in the algebraic closure of the base field, realised in
/// the fresh field F_{q^degree}.
struct ClosedPoint {
  FieldElement representative;
  std::uint32_t degree = 1;
  Embedding base_embedding;  // base field -> representative.field
};

/// One point per Frobenius orbit of degree <= d_max, sorted by degree then by
/// representative code (the smallest code in the orbit).
std::vector<ClosedPoint> closed_points(const FieldPtr& base, std::uint32_t d_max,
                                       std::uint64_t ceiling = kDefaultCeiling);

/// The closed point containing a given element of some extension of the base.
ClosedPoint closed_point_of(const FieldPtr& base, const FieldElement& x,
                            std::uint64_t ceiling = kDefaultCeiling);

/// Number of closed points of exact degree d on G_m over F_q.
std::uint64_t closed_point_count(std::uint64_t q, std::uint32_t d);

/// (F^*)^n, indexed in base (|F| - 1) with the first coordinate most
/// significant; each coordinate is g^digit.
class Torus {
 public:
  Torus(FieldPtr field, std::size_t n, std::uint64_t ceiling = kDefaultCeiling);

  std::uint64_t size() const { return size_; }
  std::size_t dimension() const { return n_; }
  const FieldPtr& field() const { return field_; }

  /// Splits [0, size) into at most `count` contiguous nonempty ranges.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks(std::size_t count) const;

  /// Calls fn(logs, codes) for each point with index in [begin, end).
  template <class Fn>
  void for_each(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    if (begin >= end) return;
    const std::uint64_t base = field_->unit_order();
    std::vector<std::uint64_t> logs(n_);
    std::vector<Code> codes(n_);
    std::uint64_t idx = begin;
    for (std::size_t i = n_; i-- > 0;) {
      logs[i] = idx % base;
      idx /= base;
    }
    for (std::size_t i = 0; i < n_; ++i) codes[i] = field_->exp(logs[i]);
    for (std::uint64_t k = begin; k < end; ++k) {
      fn(static_cast<const std::vector<std::uint64_t>&>(logs), static_cast<const std::vector<Code>&>(codes));
      for (std::size_t i = n_; i-- > 0;) {
        if (++logs[i] < base) {
          codes[i] = field_->exp(logs[i]);
          break;
        }
        logs[i] = 0;
        codes[i] = 1;
      }
    }
  }

 private:
  FieldPtr field_;
  std::size_t n_;
  std::uint64_t size_;
};

/// (q - 1)^n, or nullopt when it overflows 64 bits.
std::optional<std::uint64_t> torus_size(std::uint64_t q, std::size_t n);

/// Throws SizeCeilingExceeded unless (q - 1)^n <= ceiling.
void require_torus_within(std::uint64_t q, std::size_t n, std::uint64_t ceiling);

}  // namespace tsl
