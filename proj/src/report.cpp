#include "tsl/report.hpp"

#include <fstream>
#include <sstream>

#include "tsl/errors.hpp"

namespace tsl {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

std::int64_t read_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t read_positive(const Json& j, const std::string& where) {
  const auto v = read_int(j, where);
  if (v <= 0) fail(where, "expected a positive integer");
  return static_cast<std::uint64_t>(v);
}

IVec read_ivec(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an integer list");
  IVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_int(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

Rational read_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      fail(where, "cannot read rational '" + j.get<std::string>() + "'");
    }
  }
  fail(where, "expected an integer or a \"num/den\" string");
}

Code read_coeff(const Json& j, const Field& F, const std::string& where) {
  if (j.is_number_integer()) return F.from_integer(j.get<std::int64_t>());
  if (j.is_array()) {
    std::vector<std::uint32_t> coords;
    const std::int64_t p = F.characteristic();
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto c = read_int(j[i], where + "[" + std::to_string(i) + "]");
      coords.push_back(static_cast<std::uint32_t>(((c % p) + p) % p));
    }
    try {
      return F.from_coeffs(coords);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected an integer or a coordinate list");
}

const Json& require(const Json& doc, const char* key) {
  if (!doc.contains(key)) fail(key, "missing");
  return doc.at(key);
}

}  // namespace

Problem parse_problem(const Json& doc) {
  if (!doc.is_object()) fail("problem", "expected a JSON object");
  Problem pr;
  const auto p = read_positive(require(doc, "p"), "p");
  const auto m = doc.contains("m") ? read_positive(doc["m"], "m") : 1;
  if (doc.contains("limits")) {
    const auto& lim = doc["limits"];
    if (!lim.is_object()) fail("limits", "expected an object");
    if (lim.contains("ceiling")) pr.limits.ceiling = read_positive(lim["ceiling"], "limits.ceiling");
    if (lim.contains("k_max"))
      pr.limits.k_max = static_cast<std::uint32_t>(read_positive(lim["k_max"], "limits.k_max"));
    if (lim.contains("d_max")) {
      const auto d = read_int(lim["d_max"], "limits.d_max");
      if (d < 0) fail("limits.d_max", "expected a nonnegative integer");
      pr.limits.d_max = static_cast<std::uint32_t>(d);
    }
  }
  if (doc.contains("modulus")) {
    std::vector<std::uint32_t> mod;
    for (auto c : read_ivec(doc["modulus"], "modulus")) mod.push_back(static_cast<std::uint32_t>(c));
    pr.field = make_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(m), mod, pr.limits.ceiling);
  } else {
    pr.field = standard_field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(m), pr.limits.ceiling);
  }

  pr.mu = read_ivec(require(doc, "mu"), "mu");
  if (pr.mu.empty()) fail("mu", "needs at least one coordinate");
  const auto& terms = require(doc, "f");
  if (!terms.is_array() || terms.empty()) fail("f", "expected a nonempty list of terms");
  pr.f = LaurentPolynomial(pr.field, pr.mu.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "f[" + std::to_string(i) + "]";
    const auto& t = terms[i];
    if (!t.is_object() || !t.contains("exp")) fail(where, "expected {\"coeff\": ..., \"exp\": [...]}");
    const auto e = read_ivec(t["exp"], where + ".exp");
    if (e.size() != pr.mu.size())
      fail(where + ".exp", "has length " + std::to_string(e.size()) + ", expected " + std::to_string(pr.mu.size()));
    const Code c = t.contains("coeff") ? read_coeff(t["coeff"], *pr.field, where + ".coeff") : 1;
    pr.f.add_term(e, c);
  }
  if (pr.f.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "f: all coefficients vanish mod p");

  if (doc.contains("deformation_exponent"))
    pr.M = static_cast<std::int64_t>(read_positive(doc["deformation_exponent"], "deformation_exponent"));
  if (doc.contains("lower_order")) {
    const auto& lo = doc["lower_order"];
    if (!lo.is_array()) fail("lower_order", "expected a list");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const std::string where = "lower_order[" + std::to_string(i) + "]";
      const auto& t = lo[i];
      if (!t.is_object()) fail(where, "expected an object");
      DeformationTerm d;
      d.gamma = read_ivec(require(t, "t_exp"), where + ".t_exp");
      d.r = read_rational(require(t, "lambda_exp"), where + ".lambda_exp");
      d.u = read_ivec(require(t, "x_exp"), where + ".x_exp");
      if (d.u.size() != pr.mu.size()) fail(where + ".x_exp", "has the wrong length");
      if (i == 0) pr.s = d.gamma.size();
      if (d.gamma.size() != pr.s) fail(where + ".t_exp", "length differs from lower_order[0]");
      if (t.contains("coeff")) read_coeff(t["coeff"], *pr.field, where + ".coeff");
      pr.lower_order.push_back(std::move(d));
    }
  }
  if (doc.contains("op")) {
    if (!doc["op"].is_string()) fail("op", "expected a string such as \"sym2\"");
    pr.op = OpSpec::parse(doc["op"].get<std::string>());
  }
  pr.input_hash = fnv1a_hex(doc.dump());
  return pr;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open problem file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return parse_problem(doc);
}

// ---------------------------------------------------------------------------

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const IVec& v) { return Json(v); }

Json to_json(const QVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Json to_json(const Cyclotomic& c) {
  Json coeffs = Json::array();
  for (const auto& x : c.coeffs()) coeffs.push_back(to_string(x));
  return {{"p", c.prime()}, {"coeffs", coeffs}, {"text", c.to_string()}};
}

Json to_json(const Series& s) {
  Json out = Json::array();
  for (const auto& c : s) out.push_back(to_json(c));
  return out;
}

Json to_json(const NewtonPolygon& np) {
  Json verts = Json::array();
  for (const auto& [x, y] : np.vertices) verts.push_back({to_string(x), to_string(y)});
  Json slopes = Json::array();
  for (const auto& s : np.slopes) slopes.push_back(to_string(s));
  return {{"vertices", verts}, {"slopes", slopes}};
}

Json to_json(const FieldPtr& field) {
  return {{"p", field->characteristic()}, {"m", field->degree()}, {"modulus", field->modulus()}};
}

Json to_json(const FieldElement& x) { return {{"field", to_json(x.field)}, {"coords", x.coeffs()}}; }

Json to_json(const ClosedPoint& pt) {
  return {{"degree", pt.degree}, {"representative", to_json(pt.representative)}};
}

namespace {

Json faces_json(const std::vector<std::vector<IVec>>& faces) {
  Json out = Json::array();
  for (const auto& f : faces) out.push_back(Json(f));
  return out;
}

}  // namespace

Json geometry_json(const GeometryContext& ctx) {
  Json facets = Json::array();
  const auto& g1 = ctx.gamma1();
  for (const auto& f : ctx.facets())
    facets.push_back({{"id", f.id},
                      {"form", f.form},
                      {"tau", f.tau},
                      {"phi_mu", f.value_at_mu},
                      {"visible", std::find(g1.begin(), g1.end(), f.id) != g1.end()}});
  Json chambers = Json::array();
  for (const auto& c : ctx.chambers()) {
    Json ch{{"generators", c.generators},
            {"inequalities", c.inequalities},
            {"weight_form", to_json(c.weight_form)},
            {"m_form", to_json(c.m_form)}};
    ch["facet"] = c.facet ? Json(*c.facet) : Json(nullptr);
    chambers.push_back(ch);
  }
  return {{"dimension", ctx.dimension()},
          {"support", ctx.support()},
          {"mu", ctx.mu()},
          {"lsigma", to_json(ctx.lsigma())},
          {"lsigma_of_mu", to_json(ctx.lsigma_of_mu())},
          {"gap", to_json(ctx.gap())},
          {"case", case_name(ctx.deformation_case())},
          {"facets", facets},
          {"gamma1", g1},
          {"D", to_string(ctx.D())},
          {"d", to_string(ctx.d())},
          {"e", to_string(ctx.e())},
          {"N", to_string(ctx.N())},
          {"chambers", chambers},
          {"vertices_at_infinity", ctx.vertices_at_infinity()},
          {"faces_of_f", faces_json(ctx.faces_of_f())},
          {"faces_of_deformation", faces_json(ctx.faces_of_deformation())}};
}

Json relative_polytope_json(const RelativePolytope& up) {
  Json verts = Json::array();
  for (const auto& v : up.vertices()) verts.push_back(to_json(v));
  Json weights = Json::array();
  for (const auto& w : up.term_weights()) weights.push_back(to_string(w));
  return {{"ambient_dimension", up.ambient_dimension()},
          {"span_dimension", up.span_dimension()},
          {"vertices", verts},
          {"volume", to_string(up.volume())},
          {"normalized_volume", to_string(up.normalized_volume())},
          {"term_weights", weights}};
}

Json nondeg_json(const NondegVerdict& v) {
  Json out{{"status", status_name(v.status)}, {"depth", v.depth}, {"searched_degrees", v.searched_degrees}};
  if (v.witness) {
    Json pt = Json::array();
    for (auto c : v.witness->point) pt.push_back(v.witness->field->coeffs(c));
    out["witness"] = {{"face", v.witness->face}, {"field", to_json(v.witness->field)}, {"point", pt}};
  }
  return out;
}

Json hypotheses_json(const HypothesisReport& rep) {
  auto item = [](const HypothesisItem& h) {
    Json out{{"verdict", verdict_name(h.verdict)}, {"detail", h.detail}};
    if (h.facet) out["facet"] = *h.facet;
    if (h.phi_mu) out["phi_mu"] = *h.phi_mu;
    if (h.nondegeneracy) out["nondegeneracy"] = nondeg_json(*h.nondegeneracy);
    return out;
  };
  Json out{{"h1", item(rep.h1)}, {"h2", item(rep.h2)}, {"h3", item(rep.h3)},
           {"h4", item(rep.h4)}, {"h5", item(rep.h5)}, {"all_pass", rep.all_pass()}};
  out["case"] = rep.deformation_case ? Json(case_name(*rep.deformation_case)) : Json(nullptr);
  return out;
}

Json basis_json(const BasisB& basis) {
  Json elems = Json::array();
  for (const auto& e : basis.elements)
    elems.push_back({{"v", e.v}, {"w", to_string(e.weight)}, {"m", to_string(e.m)}});
  Json grades = Json::array();
  for (const auto& g : basis.grades)
    grades.push_back({{"weight", to_string(g.weight)},
                      {"dimension", g.dimension},
                      {"image_rank", g.image_rank},
                      {"selected", g.selected}});
  return {{"rank", basis.rank()},
          {"order", "weight, then lexicographic on exponent vectors; smallest first"},
          {"cutoff", to_string(basis.cutoff)},
          {"elements", elems},
          {"grades", grades}};
}

Json fiber_json(const FiberLReport& rep) {
  Json sums = Json::array();
  for (const auto& s : rep.sums) sums.push_back(to_json(s));
  return {{"lambda", to_json(rep.lambda)},      {"sums", sums},
          {"lpoly", to_json(rep.lpoly)},        {"degree", rep.lpoly.size() - 1},
          {"polygon", to_json(rep.polygon)},    {"bound", to_json(rep.bound)},
          {"dominates", rep.dominates},         {"basis", basis_json(rep.basis)}};
}

Json global_json(const GlobalLTruncation& g) {
  Json out{{"op", g.op.name()},
           {"domain", domain_name(g.domain)},
           {"d_max", g.d_max},
           {"coefficients", to_json(g.coefficients)},
           {"moments", to_json(g.moments)},
           {"cross_check", g.agree ? "agree" : "mismatch"},
           {"closed_points_used", g.closed_points_used}};
  if (g.domain == Domain::A1) {
    out["zero_fiber"] = {
        {"degree", g.zero_fiber_degree ? Json(*g.zero_fiber_degree) : Json(nullptr)},
        {"lpoly", to_json(g.zero_fiber_lpoly)},
        {"note", "degree found by its own polynomiality scan; it need not equal N"}};
  }
  return out;
}

Json degree_bound_json(const DegreeBoundReport& rep) {
  return {{"op", rep.op},
          {"order", rep.order},
          {"op_dimension", to_string(rep.op_dimension)},
          {"degree_bound", to_string(rep.degree_bound)},
          {"total_degree_gm", to_string(rep.total_degree_gm)},
          {"total_degree_a1", to_string(rep.total_degree_a1)},
          {"ord_q_lower_bound", to_string(rep.ord_q_lower_bound)},
          {"forces_equal_degrees", rep.forces_equal_degrees},
          {"status", "reported, not verified"}};
}

}  // namespace tsl
