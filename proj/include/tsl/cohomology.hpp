#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tsl/family.hpp"
#include "tsl/finite_field.hpp"
#include "tsl/rational.hpp"

namespace tsl {

/// Dense matrix over a finite field, row-major.
struct FieldMatrix {
  FieldPtr field;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Code> data;

  Code at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  Code& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

std::size_t matrix_rank(const FieldMatrix& m);

/// Monomials of one weight, in the global order (lexicographic on exponents).
struct GradedPiece {
  Rational weight;
  std::vector<IVec> monomials;
};

/// All graded pieces of weight <= bound, ascending.
std::vector<GradedPiece> graded_pieces(const GeometryContext& ctx, const Rational& bound,
                                       std::uint64_t ceiling = kDefaultCeiling);

/// Columns are the cofacial products (x_l dF/dx_l) x^u for every u of weight
/// i - 1 (outer loop, global order) and l = 1..n (inner loop), in the
/// coordinates of the weight-i piece. F is the fiber at `lambda`.
FieldMatrix graded_jacobian_image(const Family& family, const Embedding& base_to_field, Code lambda,
                                  const Rational& weight_i, std::uint64_t ceiling = kDefaultCeiling);

struct BasisElement {
  IVec v;
  Rational weight;
  Rational m;
};

struct GradeSummary {
  Rational weight;
  std::size_t dimension = 0;
  std::size_t image_rank = 0;
  std::size_t selected = 0;
};

struct BasisB {
  std::vector<BasisElement> elements;
  std::vector<GradeSummary> grades;
  Rational cutoff;
  std::size_t rank() const { return elements.size(); }
  std::vector<IVec> monomials() const;
  std::vector<Rational> weights() const;
};

/// Echelon complement of the graded Jacobian image, chosen greedily in the
/// global order, over all weights up to the cutoff (default n, raised by one
/// up to n + 2 while the count falls short of N). Throws RankMismatch when the
/// count still differs from N.
BasisB compute_basis(const Family& family, const Embedding& base_to_field, Code lambda,
                     std::optional<Rational> cutoff = {}, std::uint64_t ceiling = kDefaultCeiling);
BasisB compute_basis(const Family& family, const ClosedPoint& point, std::optional<Rational> cutoff = {},
                     std::uint64_t ceiling = kDefaultCeiling);

struct LambdaIndependence {
  bool identical = true;
  std::vector<BasisB> bases;  // in input order
};

LambdaIndependence verify_lambda_independence(const Family& family, const std::vector<ClosedPoint>& points,
                                              std::uint64_t ceiling = kDefaultCeiling);

}  // namespace tsl
