#include "tsl/hypotheses.hpp"

#include <algorithm>
#include <sstream>

#include "tsl/errors.hpp"

namespace tsl {

namespace {

std::string vec_text(const IVec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

std::string face_text(const std::vector<IVec>& face) {
  std::string s = "{";
  for (std::size_t i = 0; i < face.size(); ++i) s += (i ? " " : "") + vec_text(face[i]);
  return s + "}";
}

std::string witness_text(const NondegWitness& w) {
  std::ostringstream os;
  os << "face " << face_text(w.face) << " over " << w.field->describe() << " at x = (";
  for (std::size_t i = 0; i < w.point.size(); ++i) os << (i ? "," : "") << w.point[i];
  os << ")";
  return os.str();
}

std::uint64_t field_power(std::uint64_t q, std::uint32_t k) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    if (r > UINT64_MAX / q) return UINT64_MAX;
    r *= q;
  }
  return r;
}

// Searches (K^*)^n for a common zero of the toric partials of `poly`, whose
// coefficients already live in K.
std::optional<std::vector<Code>> search_torus(const LaurentPolynomial& poly, const FieldPtr& K, std::uint64_t ceiling) {
  const std::size_t n = poly.dimension();
  const auto& F = *K;
  const std::uint64_t units = F.unit_order();
  struct Term {
    IVec v;
    std::vector<Code> weighted;  // v_i * c for each i
  };
  std::vector<Term> terms;
  for (const auto& [v, c] : poly.terms()) {
    Term t{v, {}};
    for (std::size_t i = 0; i < n; ++i) t.weighted.push_back(F.mul(F.from_integer(v[i]), c));
    terms.push_back(std::move(t));
  }
  Torus torus(K, n, ceiling);
  std::optional<std::vector<Code>> found;
  std::vector<std::uint64_t> elog(terms.size());
  const std::int64_t u = static_cast<std::int64_t>(units);
  // Visiting every point is cheap next to the field work, so the scan keeps
  // going after a hit but records only the first witness.
  torus.for_each(0, torus.size(), [&](const std::vector<std::uint64_t>& logs, const std::vector<Code>& codes) {
    if (found) return;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      std::int64_t e = 0;
      for (std::size_t j = 0; j < n; ++j) e = (e + terms[t].v[j] * static_cast<std::int64_t>(logs[j])) % u;
      elog[t] = static_cast<std::uint64_t>((e + u) % u);
    }
    for (std::size_t i = 0; i < n; ++i) {
      Code s = 0;
      for (std::size_t t = 0; t < terms.size(); ++t)
        if (terms[t].weighted[i] != 0) s = F.add(s, F.mul(terms[t].weighted[i], F.exp(elog[t])));
      if (s != 0) return;
    }
    found = codes;
  });
  return found;
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string status_name(NondegVerdict::Status s) {
  switch (s) {
    case NondegVerdict::Status::NonDegenerateUpTo: return "NonDegenerateUpTo";
    case NondegVerdict::Status::DegenerateAt: return "DegenerateAt";
    case NondegVerdict::Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

bool HypothesisReport::all_pass() const {
  for (const auto* h : {&h1, &h2, &h3, &h4, &h5})
    if (h->verdict != Verdict::Pass) return false;
  return true;
}

std::uint32_t default_search_depth(std::uint64_t field_size, std::size_t n, std::uint64_t budget) {
  std::uint32_t k = 1;
  while (true) {
    std::uint64_t q = field_power(field_size, k + 1);
    if (q == UINT64_MAX) break;
    auto t = torus_size(q, n);
    if (!t || *t > budget) break;
    ++k;
  }
  return k;
}

bool verify_witness(const LaurentPolynomial& f, const NondegWitness& w) {
  const auto& K = *w.field;
  if (w.point.size() != f.dimension()) return false;
  auto emb = Embedding::between(f.field(), w.field);
  const auto face = f.restricted_to(w.face);
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    Code s = 0;
    for (const auto& [v, c] : face.terms()) {
      Code mono = emb(c);
      for (std::size_t j = 0; j < v.size(); ++j) mono = K.mul(mono, K.pow(w.point[j], v[j]));
      s = K.add(s, K.mul(K.from_integer(v[i]), mono));
    }
    if (s != 0) return false;
  }
  return std::all_of(w.point.begin(), w.point.end(), [](Code c) { return c != 0; });
}

NondegVerdict face_nondegenerate(const LaurentPolynomial& f, const std::vector<IVec>& face,
                                 std::optional<std::uint32_t> k_max, std::uint64_t ceiling) {
  const auto& base = f.field();
  const std::size_t n = f.dimension();
  const std::uint32_t depth = k_max.value_or(default_search_depth(base->size(), n));
  if (depth == 0) throw Error(ErrorKind::PreconditionFailed, "search depth must be positive");
  const auto restricted = f.restricted_to(face);

  NondegVerdict out;
  for (std::uint32_t k = 1; k <= depth; ++k) {
    const std::uint64_t Q = field_power(base->size(), k);
    require_torus_within(Q, n, ceiling);
    auto K = standard_field(base->characteristic(), base->degree() * k, ceiling);
    auto emb = Embedding::between(base, K);
    LaurentPolynomial lifted(K, n);
    for (const auto& [v, c] : restricted.terms()) lifted.add_term(v, emb(c));
    out.searched_degrees.push_back(k);
    out.depth = k;
    if (auto pt = search_torus(lifted, K, ceiling)) {
      NondegWitness w{face, K, *pt};
      if (!verify_witness(f, w))
        throw Error(ErrorKind::TheoremViolation, "degeneracy witness failed re-verification: " + witness_text(w));
      out.status = NondegVerdict::Status::DegenerateAt;
      out.witness = std::move(w);
      return out;
    }
  }
  out.status = NondegVerdict::Status::NonDegenerateUpTo;
  return out;
}

HypothesisReport check_hypotheses(const LaurentPolynomial& f, const IVec& mu, std::optional<std::uint32_t> k_max,
                                  std::uint64_t ceiling) {
  if (f.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "f has no terms");
  const std::size_t n = f.dimension();
  if (mu.size() != n)
    throw Error(ErrorKind::LengthMismatch, "mu has length " + std::to_string(mu.size()) + ", expected " +
                                               std::to_string(n));
  const auto support = f.support();
  const std::uint32_t p = f.field()->characteristic();
  HypothesisReport rep;

  std::vector<QVec> rows;
  for (const auto& v : support) rows.push_back(to_qvec(v));
  const std::size_t r = rank(rows);
  if (r == n) {
    rep.h1 = {Verdict::Pass, "dim Delta(f) = " + std::to_string(n), {}, {}, {}};
  } else {
    rep.h1 = {Verdict::Fail, "Supp(f) u {0} spans dimension " + std::to_string(r) + " < " + std::to_string(n), {}, {},
              {}};
  }

  QVec l;
  if (rep.h1.verdict != Verdict::Pass) {
    rep.h2 = {Verdict::Inconclusive, "needs H(i)", {}, {}, {}};
  } else {
    try {
      l = compute_lsigma(support);
      rep.h2 = {Verdict::Pass, "l(x) = 1 on Supp(f)", {}, {}, {}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotQuasihomogeneous) throw;
      rep.h2 = {Verdict::Fail, "Supp(f) does not lie on an affine hyperplane missing the origin", {}, {}, {}};
    }
  }

  const bool geometry_ok = rep.h1.verdict == Verdict::Pass && rep.h2.verdict == Verdict::Pass;
  if (!geometry_ok) {
    const std::string why = "needs H(i) and H(ii)";
    rep.h3 = {Verdict::Inconclusive, why, {}, {}, {}};
    rep.h4 = {Verdict::Inconclusive, why, {}, {}, {}};
    rep.h5 = {Verdict::Inconclusive, why, {}, {}, {}};
    return rep;
  }

  // H(iii): every face at infinity of Delta(f).
  {
    NondegVerdict agg;
    agg.status = NondegVerdict::Status::NonDegenerateUpTo;
    bool first = true;
    try {
      for (const auto& face : faces_at_infinity(support)) {
        auto v = face_nondegenerate(f, face, k_max, ceiling);
        if (first || v.depth < agg.depth) {
          agg.depth = v.depth;
          agg.searched_degrees = v.searched_degrees;
        }
        first = false;
        if (v.status == NondegVerdict::Status::DegenerateAt) {
          agg = v;
          break;
        }
      }
      if (agg.status == NondegVerdict::Status::DegenerateAt) {
        rep.h3 = {Verdict::Fail, "toric partials share a zero on " + witness_text(*agg.witness), {}, {}, agg};
      } else {
        rep.h3 = {Verdict::Pass,
                  "no common zero of the toric partials on any face over extensions of degree <= " +
                      std::to_string(agg.depth),
                  {}, {}, agg};
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SizeCeilingExceeded) throw;
      agg.status = NondegVerdict::Status::Inconclusive;
      rep.h3 = {Verdict::Inconclusive, e.what(), {}, {}, agg};
    }
  }

  // H(iv) / H(iv)' and H(v) from l(mu) and the facet forms of Cone(f).
  const Rational lmu = dot(l, mu);
  auto facets = cone_facets(support);
  bool in_cone = true, interior = true;
  for (auto& fc : facets) {
    fc.value_at_mu = 0;
    for (std::size_t i = 0; i < n; ++i) fc.value_at_mu += fc.form[i] * mu[i];
    if (fc.value_at_mu < 0) in_cone = false;
    if (fc.value_at_mu <= 0) interior = false;
  }
  std::vector<const FacetInfo*> relevant;
  if (lmu == 1) {
    rep.h4 = {Verdict::Fail, "l(mu) = 1", {}, {}, {}};
    rep.h5 = {Verdict::Inconclusive, "needs l(mu) != 1", {}, {}, {}};
    return rep;
  }
  if (lmu < 1) {
    rep.deformation_case = DeformationCase::Below;
    if (interior) {
      rep.h4 = {Verdict::Fail, "l(mu) = " + to_string(lmu) + " < 1 but mu is interior to Cone(f)", {}, {}, {}};
    } else {
      rep.h4 = {Verdict::Pass, "l(mu) = " + to_string(lmu) + " < 1", {}, {}, {}};
    }
    for (const auto& fc : facets)
      if (fc.value_at_mu < 0 || (in_cone && fc.value_at_mu == 0)) relevant.push_back(&fc);
  } else {
    rep.deformation_case = DeformationCase::Above;
    if (interior) {
      rep.h4 = {Verdict::Pass, "mu interior to Cone(f) and l(mu) = " + to_string(lmu) + " > 1", {}, {}, {}};
    } else {
      rep.h4 = {Verdict::Fail, "l(mu) = " + to_string(lmu) + " > 1 but mu is not interior to Cone(f)", {}, {}, {}};
    }
    for (const auto& fc : facets) relevant.push_back(&fc);
  }

  rep.h5 = {Verdict::Pass, "p = " + std::to_string(p) + " divides no phi(mu) over the visible faces", {}, {}, {}};
  for (const auto* fc : relevant) {
    if (fc->value_at_mu % static_cast<std::int64_t>(p) == 0) {
      rep.h5 = {Verdict::Fail,
                "p = " + std::to_string(p) + " divides phi(mu) = " + std::to_string(fc->value_at_mu) + " for tau = " +
                    face_text(fc->tau) + " with phi = " + vec_text(fc->form),
                fc->id, fc->value_at_mu, {}};
      break;
    }
  }
  return rep;
}

void require_h5(const Family& family) {
  const auto& g = family.geometry();
  const std::int64_t p = family.base_field()->characteristic();
  for (auto id : g.gamma1()) {
    const auto& fc = g.facets()[id];
    if (fc.value_at_mu % p == 0)
      throw Error(ErrorKind::PreconditionFailed, "H(v) fails: p divides phi(mu) = " + std::to_string(fc.value_at_mu) +
                                                     " for tau = " + face_text(fc.tau));
  }
}

NondegVerdict fiber_nondegenerate(const Family& family, const ClosedPoint& point, std::optional<std::uint32_t> k_max,
                                  std::uint64_t ceiling, const HypothesisReport* report) {
  if (report && !report->all_pass())
    throw Error(ErrorKind::PreconditionFailed, "hypotheses H(i)-H(v) do not all pass");
  require_h5(family);
  const auto& g = family.geometry();
  const auto fiber = family.fiber(point);
  NondegVerdict agg;
  agg.status = NondegVerdict::Status::NonDegenerateUpTo;
  bool first = true;
  for (const auto& face : g.faces_of_deformation()) {
    auto v = face_nondegenerate(fiber, face, k_max, ceiling);
    if (v.status == NondegVerdict::Status::DegenerateAt)
      throw Error(ErrorKind::TheoremViolation, "fiber is degenerate: " + witness_text(*v.witness));
    if (first || v.depth < agg.depth) {
      agg.depth = v.depth;
      agg.searched_degrees = v.searched_degrees;
    }
    first = false;
  }
  return agg;
}

}  // namespace tsl
