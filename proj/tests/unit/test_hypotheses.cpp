#include "doctest.h"

#include "../support/families.hpp"
#include "tsl/errors.hpp"
#include "tsl/hypotheses.hpp"

using namespace tsl;
using Status = NondegVerdict::Status;

namespace {

LaurentPolynomial poly(std::uint32_t p, std::uint32_t m, std::size_t n,
                       const std::vector<std::pair<std::int64_t, IVec>>& terms) {
  auto F = standard_field(p, m);
  LaurentPolynomial f(F, n);
  for (const auto& [c, v] : terms) f.add_term(v, F->from_integer(c));
  return f;
}

// Common zeros of the toric partials over the prime field, by direct powering.
bool brute_force_degenerate(const LaurentPolynomial& f, const std::vector<IVec>& face) {
  const auto& F = *f.field();
  const auto g = f.restricted_to(face);
  const std::size_t n = f.dimension();
  std::vector<Code> x(n, 1);
  while (true) {
    bool all_zero = true;
    for (std::size_t i = 0; i < n && all_zero; ++i) {
      Code s = 0;
      for (const auto& [v, c] : g.terms()) {
        Code t = F.mul(c, F.from_integer(v[i]));
        for (std::size_t j = 0; j < n; ++j) t = F.mul(t, F.pow(x[j], v[j]));
        s = F.add(s, t);
      }
      all_zero = s == 0;
    }
    if (all_zero) return true;
    std::size_t j = 0;
    while (j < n && x[j] == F.size() - 1) x[j++] = 1;
    if (j == n) return false;
    ++x[j];
  }
}

const std::vector<std::pair<std::int64_t, IVec>> kTwisted{{1, {1, 0}}, {1, {0, 1}}, {1, {-1, 2}}};

}  // namespace

TEST_CASE("search depth keeps the torus under the budget") {
  CHECK(default_search_depth(3, 1) == 12);
  CHECK(default_search_depth(5, 2) == 4);
  CHECK(default_search_depth(25, 2) == 2);
  CHECK(default_search_depth(1024, 3) == 1);  // never below 1
  CHECK(default_search_depth(2, 2, 9) == 2);
}

TEST_CASE("Kl3 over F5 passes every hypothesis") {
  auto f = poly(5, 1, 2, {{1, {1, 0}}, {1, {0, 1}}});
  auto rep = check_hypotheses(f, {-1, -1});
  CHECK(rep.all_pass());
  REQUIRE(rep.deformation_case);
  CHECK(*rep.deformation_case == DeformationCase::Below);
  REQUIRE(rep.h3.nondegeneracy);
  CHECK(rep.h3.nondegeneracy->status == Status::NonDegenerateUpTo);
}

TEST_CASE("hypothesis failures are verdicts") {
  SUBCASE("not quasihomogeneous") {
    auto rep = check_hypotheses(poly(5, 1, 2, {{1, {1, 0}}, {1, {0, 1}}, {1, {1, 1}}}), {-1, -1});
    CHECK(rep.h1.verdict == Verdict::Pass);
    CHECK(rep.h2.verdict == Verdict::Fail);
    CHECK(rep.h5.verdict == Verdict::Inconclusive);
  }
  SUBCASE("not full dimensional") {
    auto rep = check_hypotheses(poly(5, 1, 2, {{1, {1, 1}}, {2, {2, 2}}}), {-1, 0});
    CHECK(rep.h1.verdict == Verdict::Fail);
    CHECK(rep.h2.verdict == Verdict::Inconclusive);
  }
  SUBCASE("p divides phi(mu)") {
    auto rep = check_hypotheses(poly(3, 1, 2, {{1, {1, 0}}, {1, {0, 1}}}), {-3, -2});
    CHECK(rep.h4.verdict == Verdict::Pass);
    CHECK(rep.h5.verdict == Verdict::Fail);
    REQUIRE(rep.h5.phi_mu);
    CHECK(*rep.h5.phi_mu == -3);
    CHECK(*rep.h5.phi_mu % 3 == 0);
    // Same data in characteristic 5 is fine.
    CHECK(check_hypotheses(poly(5, 1, 2, {{1, {1, 0}}, {1, {0, 1}}}), {-3, -2}).all_pass());
  }
  SUBCASE("l(mu) = 1") {
    auto rep = check_hypotheses(poly(5, 1, 2, {{1, {1, 0}}, {1, {0, 1}}}), {2, -1});
    CHECK(rep.h4.verdict == Verdict::Fail);
    CHECK(!rep.deformation_case);
  }
  SUBCASE("above but on the boundary") {
    auto rep = check_hypotheses(poly(5, 1, 2, {{1, {1, 0}}, {1, {0, 1}}}), {3, 0});
    CHECK(*rep.deformation_case == DeformationCase::Above);
    CHECK(rep.h4.verdict == Verdict::Fail);
  }
  SUBCASE("above and interior") {
    auto rep = check_hypotheses(poly(5, 1, 2, {{1, {1, 0}}, {1, {0, 1}}}), {1, 1});
    CHECK(*rep.deformation_case == DeformationCase::Above);
    CHECK(rep.all_pass());
  }
  SUBCASE("mu on a facet of the cone below the hyperplane") {
    auto rep = check_hypotheses(poly(5, 1, 2, {{1, {3, 0}}, {1, {0, 3}}}), {1, 0});
    CHECK(rep.h5.verdict == Verdict::Fail);
    CHECK(*rep.h5.phi_mu == 0);
  }
  SUBCASE("degenerate face") {
    auto rep = check_hypotheses(poly(3, 1, 2, kTwisted), {0, -1});
    CHECK(rep.h3.verdict == Verdict::Fail);
    REQUIRE(rep.h3.nondegeneracy);
    CHECK(rep.h3.nondegeneracy->witness);
    CHECK(check_hypotheses(poly(5, 1, 2, kTwisted), {0, -1}).all_pass());
  }
  SUBCASE("input errors still raise") {
    CHECK_THROWS_AS(check_hypotheses(poly(5, 1, 2, {{1, {1, 0}}}), {1}), Error);
  }
}

TEST_CASE("face nondegeneracy examples") {
  SUBCASE("x1 + x2 never degenerates") {
    auto f = poly(3, 1, 2, {{1, {1, 0}}, {1, {0, 1}}});
    for (const auto& face : faces_at_infinity(f.support())) {
      auto v = face_nondegenerate(f, face, 3);
      CHECK(v.status == Status::NonDegenerateUpTo);
      CHECK(v.depth == 3);
      CHECK(v.searched_degrees == std::vector<std::uint32_t>{1, 2, 3});
    }
  }
  SUBCASE("x^2 in characteristic 2") {
    auto f = poly(2, 1, 1, {{1, {2}}});
    auto v = face_nondegenerate(f, {{2}}, 1);
    CHECK(v.status == Status::DegenerateAt);
    REQUIRE(v.witness);
    CHECK(v.witness->field->size() == 2);
    CHECK(v.witness->point == std::vector<Code>{1});
    CHECK(verify_witness(f, *v.witness));
  }
  SUBCASE("x^2 in characteristic 3") {
    CHECK(face_nondegenerate(poly(3, 1, 1, {{1, {2}}}), {{2}}, 4).status == Status::NonDegenerateUpTo);
  }
  SUBCASE("Kl2 fiber at 1 over F3") {
    // Faces at infinity of conv{-1, 0, 1} are the two endpoints.
    auto f = poly(3, 1, 1, {{1, {1}}, {1, {-1}}});
    auto fam = Family::build(poly(3, 1, 1, {{1, {1}}}), {-1});
    REQUIRE(fam.geometry().faces_of_deformation().size() == 2);
    for (const auto& face : fam.geometry().faces_of_deformation()) {
      auto v = face_nondegenerate(f, face, 2);
      CHECK(v.status == Status::NonDegenerateUpTo);
      CHECK(v.depth == 2);
    }
  }
  SUBCASE("collinear support degenerates exactly in characteristic 3") {
    auto f3 = poly(3, 1, 2, kTwisted);
    auto v = face_nondegenerate(f3, f3.support(), 1);
    REQUIRE(v.status == Status::DegenerateAt);
    CHECK(v.witness->point == std::vector<Code>{1, 1});
    CHECK(face_nondegenerate(poly(5, 1, 2, kTwisted), poly(5, 1, 2, kTwisted).support(), 2).status ==
          Status::NonDegenerateUpTo);
    CHECK(face_nondegenerate(poly(7, 1, 2, kTwisted), poly(7, 1, 2, kTwisted).support(), 1).status ==
          Status::NonDegenerateUpTo);
  }
  SUBCASE("ceiling") {
    auto f = poly(5, 1, 2, {{1, {1, 0}}, {1, {0, 1}}});
    CHECK_THROWS_AS(face_nondegenerate(f, f.support(), 3, 1000), Error);
  }
}

TEST_CASE("depth-one search agrees with brute force over prime fields") {
  // Every polynomial with support in a small fixed set, all coefficient patterns.
  const std::vector<IVec> pts{{1, 0}, {0, 1}, {-1, 2}, {2, -1}};
  for (std::uint32_t p : {2u, 3u, 5u}) {
    auto F = standard_field(p, 1);
    std::vector<Code> c(pts.size(), 0);
    while (true) {
      LaurentPolynomial f(F, 2);
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (c[i]) f.add_term(pts[i], c[i]);
      if (!f.is_zero()) {
        auto v = face_nondegenerate(f, f.support(), 1);
        CHECK((v.status == Status::DegenerateAt) == brute_force_degenerate(f, f.support()));
        if (v.witness) CHECK(verify_witness(f, *v.witness));
      }
      std::size_t j = 0;
      while (j < c.size() && c[j] == p - 1) c[j++] = 0;
      if (j == c.size()) break;
      ++c[j];
    }
  }
}

TEST_CASE("degeneracy does not depend on the modulus of the base field") {
  auto A = standard_field(3, 2);
  auto B = make_field(3, 2, std::vector<std::uint32_t>{2, 2, 1});
  REQUIRE(A->modulus() != B->modulus());
  for (const auto& F : {A, B}) {
    LaurentPolynomial f(F, 2);
    for (const auto& [c, v] : kTwisted) f.add_term(v, F->from_integer(c));
    auto v = face_nondegenerate(f, f.support(), 1);
    REQUIRE(v.status == Status::DegenerateAt);
    CHECK(verify_witness(f, *v.witness));
  }
  // A witness found over B, pushed through B -> A, is a witness over A.
  LaurentPolynomial fb(B, 2);
  fb.add_term({1, 0}, B->generator());
  fb.add_term({0, 1}, 1);
  fb.add_term({-1, 2}, 1);
  auto vb = face_nondegenerate(fb, fb.support(), 2);
  LaurentPolynomial fa(A, 2);
  auto iso = Embedding::between(B, A);
  for (const auto& [e, c] : fb.terms()) fa.add_term(e, iso(c));
  auto va = face_nondegenerate(fa, fa.support(), 2);
  CHECK(va.status == vb.status);
}

TEST_CASE("fiber nondegeneracy") {
  SUBCASE("Kl2 at 1 over F3") {
    auto fam = Family::build(poly(3, 1, 1, {{1, {1}}}), {-1});
    auto pts = closed_points(fam.base_field(), 1);
    auto one = std::find_if(pts.begin(), pts.end(), [](const ClosedPoint& c) { return c.representative.code == 1; });
    REQUIRE(one != pts.end());
    auto v = fiber_nondegenerate(fam, *one);
    CHECK(v.status == Status::NonDegenerateUpTo);
    CHECK(v.depth >= 2);
  }
  SUBCASE("Kl3 over F4 at a generator") {
    auto F = standard_field(2, 2);
    LaurentPolynomial f(F, 2);
    f.add_term({1, 0}, 1);
    f.add_term({0, 1}, 1);
    auto fam = Family::build(f, {-1, -1});
    auto pt = closed_point_of(F, {F, F->generator()});
    CHECK(fiber_nondegenerate(fam, pt).status == Status::NonDegenerateUpTo);
  }
  SUBCASE("H(v) failure is refused") {
    auto fam = Family::build(poly(3, 1, 2, {{1, {1, 0}}, {1, {0, 1}}}), {-3, -2});
    auto pts = closed_points(fam.base_field(), 1);
    CHECK_THROWS_WITH_AS(fiber_nondegenerate(fam, pts[0]), doctest::Contains("PreconditionFailed"), Error);
  }
  SUBCASE("a degenerate f surfaces as a theorem violation unless the report refuses it") {
    auto f = poly(3, 1, 2, kTwisted);
    auto fam = Family::build(f, {0, -1});
    auto pts = closed_points(fam.base_field(), 1);
    CHECK_THROWS_WITH_AS(fiber_nondegenerate(fam, pts[0], 1), doctest::Contains("TheoremViolation"), Error);
    auto rep = check_hypotheses(f, {0, -1});
    CHECK_THROWS_WITH_AS(fiber_nondegenerate(fam, pts[0], 1, kDefaultCeiling, &rep),
                         doctest::Contains("PreconditionFailed"), Error);
  }
}
