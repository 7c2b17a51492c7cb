#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsl/finite_field.hpp"
#include "tsl/rational.hpp"

namespace tsl {

/// Laurent polynomial in n variables with coefficients in a finite field.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  LaurentPolynomial(FieldPtr field, std::size_t n) : field_(std::move(field)), n_(n) {}

  /// Adds c * x^v, dropping the term if the coefficient cancels.
  void add_term(const IVec& exponent, Code coeff);

  const FieldPtr& field() const { return field_; }
  std::size_t dimension() const { return n_; }
  const std::map<IVec, Code>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::vector<IVec> support() const;

  /// The terms whose exponents lie in `points`.
  LaurentPolynomial restricted_to(const std::vector<IVec>& points) const;

 private:
  FieldPtr field_;
  std::size_t n_ = 0;
  std::map<IVec, Code> terms_;
};

enum class DeformationCase { Below, Above };

std::string case_name(DeformationCase c);

/// A facet of Cone(f) with its form, the support points on it and the value
/// of the form at mu.
struct FacetInfo {
  std::size_t id = 0;
  IVec form;
  std::vector<IVec> tau;
  std::int64_t value_at_mu = 0;
};

/// A closed subcone on which the weight w and the depth m are linear.
struct Chamber {
  std::optional<std::size_t> facet;  // empty for Cone(f) itself
  std::vector<IVec> generators;
  std::vector<IVec> inequalities;  // a.v >= 0 for every a
  QVec weight_form;
  QVec m_form;

  bool contains(const IVec& v) const;
};

/// The rational form l with l(v) = 1 for every v in Supp(f); throws
/// NotFullDimensional or NotQuasihomogeneous.
QVec compute_lsigma(const std::vector<IVec>& support);
QVec compute_lsigma(const LaurentPolynomial& f);

/// Facets of Cone(f), ids in sorted order of their forms. The value at mu is
/// left at zero.
std::vector<FacetInfo> cone_facets(const std::vector<IVec>& support);
std::vector<FacetInfo> cone_facets(const LaurentPolynomial& f);

/// Faces at infinity of conv({0} u Supp) as point sets, sorted (for a
/// quasihomogeneous support these are the faces of the cone).
std::vector<std::vector<IVec>> faces_at_infinity(const std::vector<IVec>& support);

/// Facet ids visible from mu: phi(mu) < 0 in the Below case, all in Above.
std::vector<std::size_t> visible_faces(const std::vector<FacetInfo>& facets, const IVec& mu, DeformationCase c);

class GeometryContext {
 public:
  static GeometryContext build(const std::vector<IVec>& support, const IVec& mu,
                               std::uint64_t ceiling = kDefaultCeiling);

  std::size_t dimension() const { return n_; }
  const std::vector<IVec>& support() const { return support_; }
  const IVec& mu() const { return mu_; }
  const QVec& lsigma() const { return lsigma_; }
  Rational lsigma_at(const IVec& v) const { return dot(lsigma_, v); }
  Rational lsigma_of_mu() const { return lsigma_mu_; }
  /// |1 - l(mu)|.
  Rational gap() const { return gap_; }
  DeformationCase deformation_case() const { return case_; }
  const std::vector<FacetInfo>& facets() const { return facets_; }
  const std::vector<std::size_t>& gamma1() const { return gamma1_; }
  const Integer& D() const { return D_; }
  const Integer& d() const { return d_; }
  const Integer& e() const { return e_; }
  const Integer& N() const { return N_; }
  const std::vector<Chamber>& chambers() const { return chambers_; }
  /// Vertices of the polytope other than the origin.
  const std::vector<IVec>& vertices_at_infinity() const { return vertices_; }

  bool in_cone(const IVec& v) const;
  Rational weight(const IVec& v) const;
  Rational m_of(const IVec& v) const;
  /// W(r, v) = l(v) + r |1 - l(mu)|; throws OutsideMonoid off the monoid.
  Rational total_weight(const Rational& r, const IVec& v) const;
  bool in_extended_monoid(const Rational& r, const IVec& v) const;
  /// Lattice points of the cone with w(v) <= bound, sorted by weight then
  /// lexicographically.
  std::vector<IVec> enumerate_weight_le(const Rational& bound, std::uint64_t ceiling = kDefaultCeiling) const;

  /// Faces at infinity of Delta(f) as point sets, sorted.
  std::vector<std::vector<IVec>> faces_of_f() const;
  /// Faces at infinity of Delta(f, mu) as point sets, sorted.
  std::vector<std::vector<IVec>> faces_of_deformation() const;

 private:
  GeometryContext() = default;
  /// (weight, m) from every chamber containing v; asserts agreement.
  std::pair<Rational, Rational> evaluate(const IVec& v) const;

  std::size_t n_ = 0;
  std::vector<IVec> support_;
  IVec mu_;
  QVec lsigma_;
  Rational lsigma_mu_;
  Rational gap_;
  DeformationCase case_ = DeformationCase::Below;
  std::vector<FacetInfo> facets_;
  std::vector<std::size_t> gamma1_;
  Integer D_ = 1, d_ = 1, e_ = 1, N_ = 0;
  std::vector<Chamber> chambers_;
  std::vector<IVec> vertices_;
};

/// A monomial T^gamma Lambda^r x^u of a lower-order deformation.
struct DeformationTerm {
  IVec gamma;
  Rational r;
  IVec u;
};

/// The relative polytope conv({0} u {gamma / (1 - W_G(r; u))}) in R^s.
class RelativePolytope {
 public:
  static RelativePolytope build(const GeometryContext& ctx, std::int64_t M, const std::vector<DeformationTerm>& terms,
                                std::size_t s);

  std::size_t ambient_dimension() const { return s_; }
  /// Dimension of the smallest linear subspace containing the polytope.
  std::size_t span_dimension() const { return s_tilde_; }
  const std::vector<QVec>& vertices() const { return vertices_; }
  /// Volume in the span, normalised so the span's lattice has covolume 1.
  Rational volume() const { return volume_; }
  /// span_dimension()! * volume().
  Rational normalized_volume() const { return normalized_volume_; }
  /// W_G(r; u) of each deformation term, in input order.
  const std::vector<Rational>& term_weights() const { return term_weights_; }

  /// Least b >= 0 with gamma in b * polytope.
  Rational weight(const IVec& gamma) const;
  /// w(gamma) + (r / M) |1 - l(mu)|.
  Rational total_weight(const IVec& gamma, const Rational& r) const;

 private:
  QVec project(const IVec& gamma) const;

  std::size_t s_ = 0;
  std::size_t s_tilde_ = 0;
  std::int64_t M_ = 1;
  Rational gap_;
  std::vector<std::size_t> pivots_;
  std::vector<QVec> span_rows_;  // reduced echelon basis of the span
  std::vector<IVec> facets_;     // homogenised: a_0 + a'.y >= 0
  std::vector<QVec> vertices_;
  Rational volume_, normalized_volume_;
  std::vector<Rational> term_weights_;
};

}  // namespace tsl
