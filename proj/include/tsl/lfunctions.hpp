#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tsl/cohomology.hpp"
#include "tsl/cyclotomic.hpp"
#include "tsl/family.hpp"
#include "tsl/finite_field.hpp"

namespace tsl {

/// sum over (K^*)^n of zeta_p^{Tr_{K/F_p}(g(x))}, where K is the field of g.
/// Splits the torus over `threads` workers (0 = hardware concurrency).
Cyclotomic torus_character_sum(const LaurentPolynomial& g, std::uint64_t ceiling = kDefaultCeiling,
                               unsigned threads = 0);

/// Content-addressed store of character sums: one text file per sum, named by
/// the FNV-1a hash of its header.
class SumCache {
 public:
  explicit SumCache(std::filesystem::path dir);

  /// $TSL_CACHE_DIR when set and nonempty.
  static std::optional<std::filesystem::path> default_dir();

  const std::filesystem::path& dir() const { return dir_; }
  std::optional<Cyclotomic> load(const std::string& header) const;
  void store(const std::string& header, const Cyclotomic& value) const;

  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

  struct GcResult {
    std::size_t kept = 0;
    std::size_t removed = 0;
  };
  /// Removes unreadable entries and stray temporary files; everything when
  /// `purge` is set.
  GcResult gc(bool purge = false) const;

 private:
  std::filesystem::path path_for(const std::string& header) const;
  std::filesystem::path dir_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

struct SumOptions {
  std::uint64_t ceiling = kDefaultCeiling;
  const SumCache* cache = nullptr;
  unsigned threads = 0;
};

/// S_r(lambda) for the fiber at a closed point, over F_{q^{r deg}}.
Cyclotomic exp_sum(const Family& family, const ClosedPoint& point, std::uint32_t r, const SumOptions& opts = {});
/// S_r of f alone (the fiber over lambda = 0), over F_{q^r}.
Cyclotomic zero_fiber_sum(const Family& family, std::uint32_t r, const SumOptions& opts = {});

struct FiberLReport {
  ClosedPoint lambda;
  std::vector<Cyclotomic> sums;  // S_1 .. S_{2N}
  Series lpoly;                  // L^{(-1)^{n+1}}, coefficients 0..N
  NewtonPolygon polygon;         // in ord_{q^deg} units
  NewtonPolygon bound;
  bool dominates = false;
  BasisB basis;
};

/// exp((-1)^{n+1} sum_{r <= order} S_r T^r / r) to T^order; sums[r - 1] = S_r.
Series lpoly_series(const std::vector<Cyclotomic>& sums, std::size_t n, std::size_t order);

/// The L-polynomial of the fiber from S_1..S_{2N}; throws PolynomialityFailure
/// unless coefficients N+1..2N vanish, the rest are integral and the degree is N.
Series fiber_lpoly(const Family& family, const ClosedPoint& point, const SumOptions& opts = {},
                   std::vector<Cyclotomic>* sums_out = nullptr);

FiberLReport fiber_L(const Family& family, const ClosedPoint& point, const SumOptions& opts = {});

/// The polygon with slopes {w(v) : v in B}.
NewtonPolygon np_lower_bound(const BasisB& basis);

/// Sym^k or the l-th exterior power.
struct OpFactor {
  enum class Kind { Sym, Ext };
  Kind kind = Kind::Sym;
  std::uint32_t power = 1;
  bool operator==(const OpFactor&) const = default;
};

/// Tensor product of symmetric and exterior powers.
struct OpSpec {
  std::vector<OpFactor> factors;

  /// "sym2", "ext3", "sym1*ext2"; "wedge" and "alt" mean "ext", "," also separates.
  static OpSpec parse(const std::string& text);
  std::string name() const;
  /// Sum of the powers, at least 1.
  std::uint32_t order() const;
  /// Dimension of the operation applied to an N-dimensional space.
  Integer dimension(std::size_t N) const;
};

/// det(1 - L(M) T) where P = det(1 - M T), via power sums.
Series op_char_poly(const Series& P, const OpSpec& op);

enum class Domain { Gm, A1 };
std::string domain_name(Domain d);

struct GlobalLTruncation {
  OpSpec op;
  Domain domain = Domain::Gm;
  std::uint32_t d_max = 0;
  Series coefficients;  // Euler product, T^0 .. T^{d_max}
  Series moments;       // the same series from exp(sum M_r T^r / r)
  bool agree = false;
  std::size_t closed_points_used = 0;
  /// Degree of the lambda = 0 fiber polynomial (A1 only), found by scanning.
  /// Left unset for operations of total power 0, which never look at it.
  std::optional<std::size_t> zero_fiber_degree;
  Series zero_fiber_lpoly;
};

/// Throws CrossCheckMismatch when the two computations differ.
GlobalLTruncation global_L_truncated(const Family& family, const OpSpec& op, Domain domain, std::uint32_t d_max,
                                     const SumOptions& opts = {});

struct DegreeBoundReport {
  std::string op;
  std::uint32_t order = 1;
  Integer op_dimension;          // dimension of L on the N-dimensional fiber space
  Rational degree_bound;         // D / |1 - l(mu)|
  Rational total_degree_gm;      // op_dimension * degree_bound * 5 * 2^{1 + 2 n |L|}
  Rational total_degree_a1;      // the same with 6 in place of 5
  Rational ord_q_lower_bound;    // reciprocal roots and poles over A1
  bool forces_equal_degrees = false;  // degree_bound < 1, so R = S
};

DegreeBoundReport degree_bound_report(const GeometryContext& ctx, const OpSpec& op);

/// A point (t, lambda) of the torus over an extension of the base field.
struct MultiPoint {
  Embedding base_to_field;
  std::vector<Code> t;
  Code lambda = 1;
};

/// Degree over the base field of the field generated by the coordinates.
std::uint32_t multipoint_degree(const MultiPoint& point);

/// S_r(t, lambda) for H(t, Lambda, x) in s + 1 + n variables (t first, then
/// Lambda, then x), summed over x in (F_{q^{r deg}}^*)^n.
Cyclotomic multiparam_exp_sum(const LaurentPolynomial& H, std::size_t s, const MultiPoint& point, std::uint32_t r,
                              const SumOptions& opts = {});

}  // namespace tsl
