#include "tsl/cohomology.hpp"

#include <map>
#include <sstream>

#include "tsl/errors.hpp"
#include "tsl/hypotheses.hpp"

namespace tsl {

namespace {

// Row-echelon span of vectors over a finite field, grown one vector at a time.
class EchelonSpan {
 public:
  EchelonSpan(FieldPtr field, std::size_t dim) : F_(std::move(field)), dim_(dim) {}

  // Adds v to the span; returns false when v was already in it.
  bool insert(std::vector<Code> v) {
    const auto& F = *F_;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Code c = v[pivots_[r]];
      if (c == 0) continue;
      for (std::size_t j = pivots_[r]; j < dim_; ++j)
        if (rows_[r][j] != 0) v[j] = F.sub(v[j], F.mul(c, rows_[r][j]));
    }
    std::size_t piv = 0;
    while (piv < dim_ && v[piv] == 0) ++piv;
    if (piv == dim_) return false;
    const Code inv = F.inv(v[piv]);
    for (std::size_t j = piv; j < dim_; ++j) v[j] = F.mul(v[j], inv);
    // Keep the rows fully reduced so that each pivot column is a unit vector.
    for (auto& row : rows_) {
      const Code c = row[piv];
      if (c == 0) continue;
      for (std::size_t j = piv; j < dim_; ++j)
        if (v[j] != 0) row[j] = F.sub(row[j], F.mul(c, v[j]));
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  FieldPtr F_;
  std::size_t dim_;
  std::vector<std::vector<Code>> rows_;
  std::vector<std::size_t> pivots_;
};

struct Operator {
  IVec v;
  std::vector<Code> weighted;  // v_l * coefficient, l = 1..n
};

std::vector<Operator> toric_partials(const LaurentPolynomial& fiber) {
  const auto& K = *fiber.field();
  std::vector<Operator> ops;
  for (const auto& [v, c] : fiber.terms()) {
    Operator op{v, {}};
    for (auto vl : v) op.weighted.push_back(K.mul(K.from_integer(vl), c));
    ops.push_back(std::move(op));
  }
  return ops;
}

FieldMatrix image_matrix(const std::vector<Operator>& ops, const FieldPtr& K, std::size_t n,
                         const std::vector<IVec>& previous, const std::vector<IVec>& current) {
  std::map<IVec, std::size_t> row_of;
  for (std::size_t r = 0; r < current.size(); ++r) row_of[current[r]] = r;
  FieldMatrix m{K, current.size(), previous.size() * n, {}};
  m.data.assign(m.rows * m.cols, 0);
  IVec sum(n);
  for (std::size_t a = 0; a < previous.size(); ++a) {
    for (const auto& op : ops) {
      for (std::size_t i = 0; i < n; ++i) sum[i] = previous[a][i] + op.v[i];
      // Products that are not cofacial land in lower weight and are dropped.
      auto it = row_of.find(sum);
      if (it == row_of.end()) continue;
      for (std::size_t l = 0; l < n; ++l) {
        Code& cell = m.at(it->second, a * n + l);
        cell = K->add(cell, op.weighted[l]);
      }
    }
  }
  return m;
}

}  // namespace

std::size_t matrix_rank(const FieldMatrix& m) {
  EchelonSpan span(m.field, m.rows);
  for (std::size_t c = 0; c < m.cols; ++c) {
    std::vector<Code> col(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) col[r] = m.at(r, c);
    span.insert(std::move(col));
  }
  return span.rank();
}

std::vector<IVec> BasisB::monomials() const {
  std::vector<IVec> out;
  for (const auto& e : elements) out.push_back(e.v);
  return out;
}

std::vector<Rational> BasisB::weights() const {
  std::vector<Rational> out;
  for (const auto& e : elements) out.push_back(e.weight);
  return out;
}

std::vector<GradedPiece> graded_pieces(const GeometryContext& ctx, const Rational& bound, std::uint64_t ceiling) {
  std::vector<GradedPiece> out;
  for (const auto& v : ctx.enumerate_weight_le(bound, ceiling)) {
    const Rational w = ctx.weight(v);
    if (out.empty() || out.back().weight != w) out.push_back({w, {}});
    out.back().monomials.push_back(v);
  }
  return out;
}

FieldMatrix graded_jacobian_image(const Family& family, const Embedding& base_to_field, Code lambda,
                                  const Rational& weight_i, std::uint64_t ceiling) {
  const auto fiber = family.fiber(base_to_field, lambda);
  const auto& ctx = family.geometry();
  const auto pieces = graded_pieces(ctx, weight_i, ceiling);
  std::vector<IVec> previous, current;
  for (const auto& pc : pieces) {
    if (pc.weight == weight_i - 1) previous = pc.monomials;
    if (pc.weight == weight_i) current = pc.monomials;
  }
  return image_matrix(toric_partials(fiber), fiber.field(), family.dimension(), previous, current);
}

BasisB compute_basis(const Family& family, const Embedding& base_to_field, Code lambda, std::optional<Rational> cutoff,
                     std::uint64_t ceiling) {
  require_h5(family);
  const auto& ctx = family.geometry();
  const std::size_t n = family.dimension();
  const Rational start = cutoff.value_or(Rational(static_cast<long>(n)));
  if (start < Rational(static_cast<long>(n)))
    throw Error(ErrorKind::PreconditionFailed, "weight cutoff must be at least n = " + std::to_string(n));
  const auto fiber = family.fiber(base_to_field, lambda);
  const auto ops = toric_partials(fiber);
  const auto& K = fiber.field();
  const std::size_t target = static_cast<std::size_t>(ctx.N());

  BasisB basis;
  for (int extra = 0; extra <= 2; ++extra) {
    basis = BasisB{};
    basis.cutoff = start + extra;
    const auto pieces = graded_pieces(ctx, basis.cutoff, ceiling);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const auto& pc = pieces[k];
      const std::vector<IVec> none;
      const std::vector<IVec>* previous = &none;
      for (std::size_t j = 0; j < k; ++j)
        if (pieces[j].weight == pc.weight - 1) previous = &pieces[j].monomials;
      const auto img = image_matrix(ops, K, n, *previous, pc.monomials);
      EchelonSpan span(K, pc.monomials.size());
      for (std::size_t c = 0; c < img.cols; ++c) {
        std::vector<Code> col(img.rows);
        for (std::size_t r = 0; r < img.rows; ++r) col[r] = img.at(r, c);
        span.insert(std::move(col));
      }
      GradeSummary g{pc.weight, pc.monomials.size(), span.rank(), 0};
      for (std::size_t r = 0; r < pc.monomials.size(); ++r) {
        std::vector<Code> unit(pc.monomials.size(), 0);
        unit[r] = 1;
        if (span.insert(std::move(unit))) {
          basis.elements.push_back({pc.monomials[r], pc.weight, ctx.m_of(pc.monomials[r])});
          ++g.selected;
        }
      }
      basis.grades.push_back(g);
    }
    if (basis.rank() >= target) break;
  }
  if (basis.rank() != target) {
    std::ostringstream os;
    os << "basis has " << basis.rank() << " elements up to weight " << to_string(basis.cutoff) << " but N = " << target
       << "; per grade (weight:dim/image/selected)";
    for (const auto& g : basis.grades)
      os << " " << to_string(g.weight) << ":" << g.dimension << "/" << g.image_rank << "/" << g.selected;
    if (basis.rank() < target) os << "; a larger cutoff may be needed";
    throw Error(ErrorKind::RankMismatch, os.str());
  }
  return basis;
}

BasisB compute_basis(const Family& family, const ClosedPoint& point, std::optional<Rational> cutoff,
                     std::uint64_t ceiling) {
  return compute_basis(family, point.base_embedding, point.representative.code, std::move(cutoff), ceiling);
}

LambdaIndependence verify_lambda_independence(const Family& family, const std::vector<ClosedPoint>& points,
                                              std::uint64_t ceiling) {
  LambdaIndependence out;
  for (const auto& pt : points) {
    out.bases.push_back(compute_basis(family, pt, std::nullopt, ceiling));
    if (out.bases.back().monomials() != out.bases.front().monomials()) out.identical = false;
  }
  return out;
}

}  // namespace tsl
