#include <random>
#include <set>

#include "doctest.h"
#include "tsl/errors.hpp"
#include "tsl/finite_field.hpp"

using namespace tsl;

namespace {

// Tr(x) as the sum of Frobenius iterates, independent of the trace tables.
std::uint32_t trace_by_frobenius(const Field& F, Code x) {
  Code acc = 0, y = x;
  for (std::uint32_t i = 0; i < F.degree(); ++i) {
    acc = F.add(acc, y);
    y = F.frobenius(y);
  }
  auto c = F.coeffs(acc);
  for (std::size_t i = 1; i < c.size(); ++i) REQUIRE(c[i] == 0);
  return c[0];
}

// Schoolbook product of coordinate vectors modulo the field modulus.
Code slow_mul(const Field& F, Code a, Code b) {
  const auto p = F.characteristic();
  const auto m = F.degree();
  auto x = F.coeffs(a), y = F.coeffs(b);
  std::vector<std::uint64_t> prod(2 * m, 0);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(x[i]) * y[j]) % p;
  const auto& f = F.modulus();
  for (std::size_t k = 2 * m - 1; k >= m; --k) {
    auto c = prod[k];
    if (c == 0) continue;
    for (std::uint32_t i = 0; i <= m; ++i) prod[k - m + i] = (prod[k - m + i] + p * p - c * f[i] % p) % p;
  }
  std::vector<std::uint32_t> out(m);
  for (std::uint32_t i = 0; i < m; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return F.from_coeffs(out);
}

}  // namespace

TEST_CASE("make_field picks deterministic moduli") {
  CHECK(make_field(3, 1)->modulus() == std::vector<std::uint32_t>{0, 1});
  CHECK(make_field(2, 2)->modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK_NOTHROW(make_field(3, 2, std::vector<std::uint32_t>{1, 0, 1}));
  // t^2 + 1 over F_3 has no root in {0, 1, 2}.
  for (int t = 0; t < 3; ++t) CHECK((t * t + 1) % 3 != 0);
}

TEST_CASE("make_field rejects bad input") {
  CHECK_THROWS_AS(make_field(4, 1), Error);
  try {
    make_field(5, 2, std::vector<std::uint32_t>{4, 0, 1});  // t^2 - 1
    FAIL("expected ReducibleModulus");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReducibleModulus);
  }
  try {
    make_field(2, 30);
    FAIL("expected SizeCeilingExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SizeCeilingExceeded);
  }
}

TEST_CASE("absolute trace examples") {
  auto F9 = make_field(3, 2);
  CHECK(F9->absolute_trace(0) == 0);
  CHECK(F9->absolute_trace(1) == 2);
  auto F4 = make_field(2, 2);
  // Every element outside F_2 satisfies g^2 = g + 1, so g + g^2 = 1.
  for (Code g = 2; g < 4; ++g) CHECK(F4->absolute_trace(g) == 1);
}

TEST_CASE("field arithmetic agrees with schoolbook polynomial arithmetic") {
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {2, 3}, {3, 2}, {5, 2}, {7, 1}, {3, 4}, {2, 8}}) {
    auto F = make_field(p, m);
    std::mt19937 rng(p * 100 + m);
    std::uniform_int_distribution<Code> pick(0, static_cast<Code>(F->size() - 1));
    for (int trial = 0; trial < 200; ++trial) {
      Code a = pick(rng), b = pick(rng);
      CHECK(F->mul(a, b) == slow_mul(*F, a, b));
      // Addition is coordinatewise.
      auto x = F->coeffs(a), y = F->coeffs(b), s = F->coeffs(F->add(a, b));
      for (std::uint32_t i = 0; i < m; ++i) CHECK(s[i] == (x[i] + y[i]) % p);
      CHECK(F->add(a, F->neg(a)) == 0);
      if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
      // Frobenius is a ring homomorphism.
      CHECK(F->frobenius(F->add(a, b)) == F->add(F->frobenius(a), F->frobenius(b)));
      CHECK(F->frobenius(F->mul(a, b)) == F->mul(F->frobenius(a), F->frobenius(b)));
    }
  }
}

TEST_CASE("absolute trace is linear, surjective and matches Frobenius sums") {
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {2, 4}, {3, 1}, {3, 3}, {5, 2}, {7, 2}}) {
    auto F = make_field(p, m);
    std::set<std::uint32_t> image;
    for (Code x = 0; x < F->size(); ++x) {
      CHECK(F->absolute_trace(x) == trace_by_frobenius(*F, x));
      image.insert(F->absolute_trace(x));
    }
    CHECK(image.size() == p);
    for (Code x = 0; x < std::min<std::uint64_t>(F->size(), 30); ++x)
      for (Code y = 0; y < std::min<std::uint64_t>(F->size(), 30); ++y)
        CHECK(F->absolute_trace(F->add(x, y)) == (F->absolute_trace(x) + F->absolute_trace(y)) % p);
  }
}

TEST_CASE("torus enumeration") {
  auto F3 = make_field(3, 1);
  std::vector<Code> seen;
  Torus t1(F3, 1);
  t1.for_each(0, t1.size(), [&](const auto&, const auto& codes) { seen.push_back(codes[0]); });
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<Code>{1, 2});

  Torus t2(F3, 2);
  CHECK(t2.size() == 4);
  CHECK(Torus(make_field(2, 2), 1).size() == 3);

  // Chunks partition the index range and each point appears once.
  auto F9 = make_field(3, 2);
  Torus t3(F9, 3);
  std::set<std::vector<Code>> points;
  std::uint64_t visits = 0;
  for (auto [b, e] : t3.chunks(7))
    t3.for_each(b, e, [&](const auto&, const auto& codes) {
      points.insert(codes);
      ++visits;
    });
  CHECK(visits == 512);
  CHECK(points.size() == 512);

  CHECK_THROWS_AS(Torus(F9, 9, 1000), Error);
}

TEST_CASE("closed points match the Mobius count") {
  auto F3 = make_field(3, 1);
  auto pts = closed_points(F3, 2);
  CHECK(pts.size() == 5);
  CHECK(std::count_if(pts.begin(), pts.end(), [](auto& c) { return c.degree == 2; }) == 3);

  auto F2 = make_field(2, 1);
  auto pts2 = closed_points(F2, 3);
  std::vector<int> by_degree(4, 0);
  for (auto& c : pts2) by_degree[c.degree]++;
  CHECK(by_degree == std::vector<int>{0, 1, 1, 2});

  for (auto [p, m, dmax] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
           {2, 1, 6}, {3, 1, 4}, {2, 2, 3}, {5, 1, 3}}) {
    auto base = make_field(p, m);
    auto all = closed_points(base, dmax);
    for (std::uint32_t d = 1; d <= dmax; ++d) {
      auto count = std::count_if(all.begin(), all.end(), [&](auto& c) { return c.degree == d; });
      CHECK(static_cast<std::uint64_t>(count) == closed_point_count(base->size(), d));
    }
    // Each representative has exact orbit size equal to its degree.
    for (auto& c : all) {
      const auto& K = c.representative.field;
      Code x = c.representative.code, y = x;
      std::uint32_t size = 0;
      do {
        y = K->pow(y, base->size());
        ++size;
      } while (y != x);
      CHECK(size == c.degree);
    }
  }
}

TEST_CASE("embeddings are ring homomorphisms and closed points are recoverable") {
  auto F4 = standard_field(2, 2);
  auto F16 = standard_field(2, 4);
  auto e = Embedding::between(F4, F16);
  for (Code a = 0; a < 4; ++a)
    for (Code b = 0; b < 4; ++b) {
      CHECK(e(F4->add(a, b)) == F16->add(e(a), e(b)));
      CHECK(e(F4->mul(a, b)) == F16->mul(e(a), e(b)));
    }
  auto F3 = standard_field(3, 1);
  auto F81 = standard_field(3, 4);
  for (Code x = 1; x < 81; x += 7) {
    auto cp = closed_point_of(F3, FieldElement{F81, x});
    CHECK(4 % cp.degree == 0);
    auto pts = closed_points(F3, cp.degree);
    bool found = false;
    for (auto& c : pts)
      if (c.degree == cp.degree && c.representative.code == cp.representative.code) found = true;
    CHECK(found);
  }
}
