#include "tsl/lattice_geometry.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tsl/errors.hpp"
#include "tsl/polyhedral.hpp"

namespace tsl {

namespace {

std::string vec_str(const IVec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

std::vector<QVec> as_rows(const std::vector<IVec>& pts) {
  std::vector<QVec> out;
  for (const auto& p : pts) out.push_back(to_qvec(p));
  return out;
}

Integer floor_of(const Rational& r) {
  Integer q = numerator_of(r) / denominator_of(r);
  if (q * denominator_of(r) > numerator_of(r)) q -= 1;
  return q;
}

Integer ceil_of(const Rational& r) { return -floor_of(-r); }

}  // namespace

void LaurentPolynomial::add_term(const IVec& exponent, Code coeff) {
  if (exponent.size() != n_)
    throw Error(ErrorKind::ParseError, "exponent " + vec_str(exponent) + " has length " +
                                           std::to_string(exponent.size()) + ", expected " + std::to_string(n_));
  auto it = terms_.find(exponent);
  Code sum = it == terms_.end() ? coeff : field_->add(it->second, coeff);
  if (sum == 0) {
    if (it != terms_.end()) terms_.erase(it);
  } else {
    terms_[exponent] = sum;
  }
}

std::vector<IVec> LaurentPolynomial::support() const {
  std::vector<IVec> out;
  for (const auto& [v, c] : terms_) out.push_back(v);
  return out;
}

LaurentPolynomial LaurentPolynomial::restricted_to(const std::vector<IVec>& points) const {
  LaurentPolynomial out(field_, n_);
  for (const auto& v : points) {
    auto it = terms_.find(v);
    if (it != terms_.end()) out.terms_.emplace(v, it->second);
  }
  return out;
}

std::string case_name(DeformationCase c) { return c == DeformationCase::Below ? "Below" : "Above"; }

bool Chamber::contains(const IVec& v) const {
  return std::all_of(inequalities.begin(), inequalities.end(), [&](const IVec& a) { return dot(a, v) >= 0; });
}

QVec compute_lsigma(const std::vector<IVec>& support) {
  if (support.empty()) throw Error(ErrorKind::NotFullDimensional, "empty support");
  const std::size_t n = support[0].size();
  auto rows = as_rows(support);
  if (rank(rows) < n)
    throw Error(ErrorKind::NotFullDimensional, "support spans a subspace of dimension " +
                                                   std::to_string(rank(rows)) + " < " + std::to_string(n));
  auto l = solve_unique(rows, QVec(support.size(), Rational(1)));
  if (!l) throw Error(ErrorKind::NotQuasihomogeneous, "support does not lie on one affine hyperplane avoiding 0");
  return *l;
}

QVec compute_lsigma(const LaurentPolynomial& f) { return compute_lsigma(f.support()); }

std::vector<FacetInfo> cone_facets(const std::vector<IVec>& support) {
  auto forms = polyhedral::cone_facets(as_rows(support));
  std::vector<FacetInfo> out;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    FacetInfo f;
    f.id = i;
    f.form = forms[i];
    for (const auto& v : support)
      if (dot(forms[i], v) == 0) f.tau.push_back(v);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<FacetInfo> cone_facets(const LaurentPolynomial& f) { return cone_facets(f.support()); }

std::vector<std::size_t> visible_faces(const std::vector<FacetInfo>& facets, const IVec& mu, DeformationCase c) {
  std::vector<std::size_t> out;
  for (const auto& f : facets) {
    std::int64_t value = dot(f.form, mu);
    if (c == DeformationCase::Above) {
      if (value == 0)
        throw Error(ErrorKind::MuOnFacet, "mu lies on the facet " + vec_str(f.form) + " of Cone(f)");
      out.push_back(f.id);
    } else if (value < 0) {
      out.push_back(f.id);
    }
  }
  return out;
}

GeometryContext GeometryContext::build(const std::vector<IVec>& support, const IVec& mu, std::uint64_t ceiling) {
  GeometryContext ctx;
  ctx.n_ = mu.size();
  for (const auto& v : support)
    if (v.size() != ctx.n_)
      throw Error(ErrorKind::ParseError, "support point " + vec_str(v) + " does not have length " +
                                             std::to_string(ctx.n_));
  ctx.support_ = support;
  std::sort(ctx.support_.begin(), ctx.support_.end());
  ctx.mu_ = mu;
  ctx.lsigma_ = compute_lsigma(ctx.support_);
  ctx.facets_ = cone_facets(ctx.support_);
  for (auto& f : ctx.facets_) f.value_at_mu = dot(f.form, mu);

  ctx.lsigma_mu_ = dot(ctx.lsigma_, mu);
  if (ctx.lsigma_mu_ == 1)
    throw Error(ErrorKind::ExcludedCase, "l(mu) = 1 places mu on the hyperplane of Supp(f)");
  ctx.gap_ = ctx.lsigma_mu_ < 1 ? Rational(1 - ctx.lsigma_mu_) : Rational(ctx.lsigma_mu_ - 1);

  bool all_nonneg = true, any_zero = false, all_pos = true;
  for (const auto& f : ctx.facets_) {
    all_nonneg = all_nonneg && f.value_at_mu >= 0;
    all_pos = all_pos && f.value_at_mu > 0;
    any_zero = any_zero || f.value_at_mu == 0;
  }
  if (ctx.lsigma_mu_ < 1) {
    ctx.case_ = DeformationCase::Below;
    if (all_nonneg && any_zero)
      throw Error(ErrorKind::MuOnFacet, "mu = " + vec_str(mu) + " lies on the boundary of Cone(f)");
    if (all_nonneg)
      throw Error(ErrorKind::LowerOrderCase, "mu = " + vec_str(mu) + " lies in Cone(f) with l(mu) < 1");
  } else {
    ctx.case_ = DeformationCase::Above;
    if (!all_pos)
      throw Error(ErrorKind::AboveNotInterior, "l(mu) > 1 requires mu in the interior of Cone(f)");
  }
  ctx.gamma1_ = visible_faces(ctx.facets_, mu, ctx.case_);
  for (auto id : ctx.gamma1_) ctx.D_ = lcm(ctx.D_, Integer(std::abs(ctx.facets_[id].value_at_mu)));

  // Chambers.
  const Rational one_minus_l = 1 - ctx.lsigma_mu_;
  if (ctx.case_ == DeformationCase::Below) {
    Chamber c;
    c.generators = ctx.support_;
    for (const auto& f : ctx.facets_) c.inequalities.push_back(f.form);
    c.weight_form = ctx.lsigma_;
    c.m_form = QVec(ctx.n_, Rational(0));
    ctx.chambers_.push_back(std::move(c));
  }
  for (auto id : ctx.gamma1_) {
    const auto& f = ctx.facets_[id];
    Chamber c;
    c.facet = id;
    c.generators = f.tau;
    c.generators.push_back(mu);
    c.inequalities = polyhedral::cone_facets(as_rows(c.generators));
    const Rational phi_mu = f.value_at_mu;
    const Rational sign = ctx.case_ == DeformationCase::Below ? 1 : -1;
    for (std::size_t i = 0; i < ctx.n_; ++i) {
      c.weight_form.push_back(ctx.lsigma_[i] + one_minus_l / phi_mu * f.form[i]);
      c.m_form.push_back(sign * f.form[i] / phi_mu);
    }
    ctx.chambers_.push_back(std::move(c));
  }

  // N as the sum of pyramid volumes over the chambers.
  Rational volume = 0;
  std::set<IVec> vertices;
  for (const auto& c : ctx.chambers_) {
    auto rows = as_rows(c.generators);
    volume += polyhedral::normalized_cone_volume(rows, c.inequalities);
    for (auto i : polyhedral::extreme_generators(rows, c.inequalities)) vertices.insert(c.generators[i]);
  }
  if (denominator_of(volume) != 1) throw Error(ErrorKind::TheoremViolation, "normalized volume is not an integer");
  ctx.N_ = numerator_of(volume);
  ctx.vertices_.assign(vertices.begin(), vertices.end());

  // Weight denominators: Hilbert bases of the simplicial pieces sit below weight n.
  for (const auto& v : ctx.enumerate_weight_le(Rational(static_cast<std::int64_t>(ctx.n_)), ceiling))
    ctx.d_ = lcm(ctx.d_, denominator_of(ctx.weight(v)));
  ctx.e_ = lcm(lcm(ctx.D_, ctx.d_), denominator_of(ctx.gap_ / Rational(ctx.D_)));
  return ctx;
}

bool GeometryContext::in_cone(const IVec& v) const {
  return std::any_of(chambers_.begin(), chambers_.end(), [&](const Chamber& c) { return c.contains(v); });
}

std::pair<Rational, Rational> GeometryContext::evaluate(const IVec& v) const {
  std::optional<std::pair<Rational, Rational>> found;
  for (const auto& c : chambers_) {
    if (!c.contains(v)) continue;
    std::pair<Rational, Rational> here{dot(c.weight_form, v), dot(c.m_form, v)};
    if (found && *found != here)
      throw Error(ErrorKind::TheoremViolation, "chamber formulas disagree at " + vec_str(v));
    found = here;
  }
  if (!found) throw Error(ErrorKind::OutsideCone, vec_str(v) + " is outside Cone(f, mu)");
  return *found;
}

Rational GeometryContext::weight(const IVec& v) const { return evaluate(v).first; }

Rational GeometryContext::m_of(const IVec& v) const { return evaluate(v).second; }

bool GeometryContext::in_extended_monoid(const Rational& r, const IVec& v) const {
  if (!in_cone(v)) return false;
  return r >= m_of(v);
}

Rational GeometryContext::total_weight(const Rational& r, const IVec& v) const {
  if (!in_extended_monoid(r, v))
    throw Error(ErrorKind::OutsideMonoid, "(" + to_string(r) + ", " + vec_str(v) + ") is outside the extended monoid");
  return lsigma_at(v) + r * gap_;
}

std::vector<IVec> GeometryContext::enumerate_weight_le(const Rational& bound, std::uint64_t ceiling) const {
  if (bound < 0) throw Error(ErrorKind::PreconditionFailed, "weight bound must be nonnegative");
  std::vector<std::int64_t> lo(n_, 0), hi(n_, 0);
  for (const auto& c : chambers_)
    for (const auto& g : c.generators)
      for (std::size_t i = 0; i < n_; ++i) {
        Rational x = bound * g[i];
        lo[i] = std::min<std::int64_t>(lo[i], static_cast<std::int64_t>(floor_of(x)));
        hi[i] = std::max<std::int64_t>(hi[i], static_cast<std::int64_t>(ceil_of(x)));
      }
  Integer box = 1;
  for (std::size_t i = 0; i < n_; ++i) box *= hi[i] - lo[i] + 1;
  if (box > ceiling)
    throw Error(ErrorKind::SizeCeilingExceeded, "bounding box of " + box.str() + " points exceeds ceiling");

  std::vector<std::pair<Rational, IVec>> found;
  IVec v = lo;
  for (;;) {
    if (in_cone(v)) {
      Rational w = weight(v);
      if (w <= bound) found.emplace_back(w, v);
    }
    bool done = true;
    for (std::size_t i = n_; i-- > 0;) {
      if (++v[i] <= hi[i]) {
        done = false;
        break;
      }
      v[i] = lo[i];
    }
    if (done) break;
  }
  std::sort(found.begin(), found.end());
  std::vector<IVec> out;
  for (auto& [w, p] : found) out.push_back(std::move(p));
  return out;
}

namespace {

std::vector<std::vector<IVec>> faces_from(const std::vector<IVec>& gens, const std::vector<IVec>& facets,
                                          std::set<std::vector<IVec>>& into) {
  for (const auto& idx : polyhedral::cone_faces(as_rows(gens), facets)) {
    std::vector<IVec> pts;
    for (auto i : idx) pts.push_back(gens[i]);
    std::sort(pts.begin(), pts.end());
    into.insert(pts);
  }
  return {into.begin(), into.end()};
}

}  // namespace

std::vector<std::vector<IVec>> faces_at_infinity(const std::vector<IVec>& support) {
  std::vector<IVec> forms;
  for (const auto& f : cone_facets(support)) forms.push_back(f.form);
  std::set<std::vector<IVec>> all;
  return faces_from(support, forms, all);
}

std::vector<std::vector<IVec>> GeometryContext::faces_of_f() const { return faces_at_infinity(support_); }

std::vector<std::vector<IVec>> GeometryContext::faces_of_deformation() const {
  std::set<std::vector<IVec>> all;
  for (const auto& c : chambers_) faces_from(c.generators, c.inequalities, all);
  return {all.begin(), all.end()};
}

RelativePolytope RelativePolytope::build(const GeometryContext& ctx, std::int64_t M,
                                         const std::vector<DeformationTerm>& terms, std::size_t s) {
  if (M < 1) throw Error(ErrorKind::PreconditionFailed, "deformation exponent must be positive");
  RelativePolytope up;
  up.s_ = s;
  up.M_ = M;
  up.gap_ = ctx.gap();

  std::vector<QVec> points;
  for (const auto& t : terms) {
    if (t.gamma.size() != s)
      throw Error(ErrorKind::ParseError, "deformation exponent " + vec_str(t.gamma) + " has wrong length");
    if (!ctx.in_cone(t.u) || t.r < Rational(M) * ctx.m_of(t.u))
      throw Error(ErrorKind::OutsideMonoid, "deformation monomial with x-exponent " + vec_str(t.u) +
                                                " is outside the extended monoid of G");
    Rational W = ctx.lsigma_at(t.u) + t.r * ctx.gap() / Rational(M);
    if (W >= 1)
      throw Error(ErrorKind::NotLowerOrder, "deformation monomial " + vec_str(t.u) + " has W_G = " + to_string(W));
    up.term_weights_.push_back(W);
    QVec y;
    for (auto g : t.gamma) y.push_back(Rational(g) / (1 - W));
    points.push_back(std::move(y));
  }

  // Reduced echelon basis of the span.
  std::vector<QVec> rows = points;
  std::size_t r = 0;
  for (std::size_t c = 0; c < s && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = 0; j < s; ++j) rows[i][j] -= f * rows[r][j];
    }
    up.pivots_.push_back(c);
    ++r;
  }
  rows.resize(r);
  up.span_rows_ = rows;
  up.s_tilde_ = r;

  if (r == 0) {
    up.vertices_.push_back(QVec(s, Rational(0)));
    up.volume_ = 1;
    up.normalized_volume_ = 1;
    return up;
  }

  // Homogenised projected points (1, pi(y)), including the origin.
  std::vector<QVec> hom{[&] {
    QVec z(r + 1, Rational(0));
    z[0] = 1;
    return z;
  }()};
  std::vector<QVec> originals{QVec(s, Rational(0))};
  for (const auto& y : points) {
    QVec h{Rational(1)};
    for (auto c : up.pivots_) h.push_back(y[c]);
    hom.push_back(std::move(h));
    originals.push_back(y);
  }
  up.facets_ = polyhedral::cone_facets(hom);
  std::set<QVec> verts;
  for (auto i : polyhedral::extreme_generators(hom, up.facets_)) verts.insert(originals[i]);
  up.vertices_.assign(verts.begin(), verts.end());
  Rational projected = polyhedral::normalized_cone_volume(hom, up.facets_);

  // Index of the projected span lattice {z in Z^r : A z integral} in Z^r.
  Integer den = 1;
  for (const auto& row : rows)
    for (const auto& x : row) den = lcm(den, denominator_of(x));
  const auto d = static_cast<std::int64_t>(den);
  std::int64_t total = 1, hits = 0;
  for (std::size_t i = 0; i < r; ++i) total *= d;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<std::int64_t> z(r);
    std::int64_t rest = idx;
    for (std::size_t i = 0; i < r; ++i) {
      z[i] = rest % d;
      rest /= d;
    }
    bool integral = true;
    for (std::size_t j = 0; j < s && integral; ++j) {
      Rational x = 0;
      for (std::size_t i = 0; i < r; ++i) x += rows[i][j] * z[i];
      integral = denominator_of(x) == 1;
    }
    if (integral) ++hits;
  }
  Rational index(total, hits);
  up.normalized_volume_ = projected / index;
  Rational fact = 1;
  for (std::size_t k = 2; k <= r; ++k) fact *= static_cast<std::int64_t>(k);
  up.volume_ = up.normalized_volume_ / fact;
  return up;
}

QVec RelativePolytope::project(const IVec& gamma) const {
  if (gamma.size() != s_) throw Error(ErrorKind::PreconditionFailed, "wrong length for " + vec_str(gamma));
  QVec coords;
  for (auto c : pivots_) coords.emplace_back(gamma[c]);
  for (std::size_t j = 0; j < s_; ++j) {
    Rational x = 0;
    for (std::size_t i = 0; i < s_tilde_; ++i) x += span_rows_[i][j] * coords[i];
    if (x != gamma[j]) throw Error(ErrorKind::OutsideCone, vec_str(gamma) + " is outside the span of the polytope");
  }
  return coords;
}

Rational RelativePolytope::weight(const IVec& gamma) const {
  QVec y = project(gamma);
  if (s_tilde_ == 0) return 0;
  Rational w = 0;
  for (const auto& a : facets_) {
    Rational lin = 0;
    for (std::size_t i = 0; i < s_tilde_; ++i) lin += Rational(a[i + 1]) * y[i];
    if (a[0] == 0) {
      if (lin < 0) throw Error(ErrorKind::OutsideCone, vec_str(gamma) + " is outside Cone(Upsilon)");
    } else {
      w = std::max(w, -lin / Rational(a[0]));
    }
  }
  return w;
}

Rational RelativePolytope::total_weight(const IVec& gamma, const Rational& r) const {
  return weight(gamma) + r / Rational(M_) * gap_;
}

}  // namespace tsl
