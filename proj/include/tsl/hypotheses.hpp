#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsl/family.hpp"
#include "tsl/finite_field.hpp"
#include "tsl/lattice_geometry.hpp"

namespace tsl {

enum class Verdict { Pass, Fail, Inconclusive };

std::string verdict_name(Verdict v);

/// A point of the torus over `field` where all toric partials of the face
/// polynomial vanish.
struct NondegWitness {
  std::vector<IVec> face;
  FieldPtr field;
  std::vector<Code> point;
};

struct NondegVerdict {
  enum class Status { NonDegenerateUpTo, DegenerateAt, Inconclusive };
  Status status = Status::Inconclusive;
  /// Largest extension degree searched (over the coefficient field).
  std::uint32_t depth = 0;
  std::vector<std::uint32_t> searched_degrees;
  std::optional<NondegWitness> witness;
};

std::string status_name(NondegVerdict::Status s);

struct HypothesisItem {
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
  std::optional<std::size_t> facet;         // H(v): offending facet id
  std::optional<std::int64_t> phi_mu;       // H(v): phi(mu) at that facet
  std::optional<NondegVerdict> nondegeneracy;  // H(iii)
};

struct HypothesisReport {
  HypothesisItem h1, h2, h3, h4, h5;
  std::optional<DeformationCase> deformation_case;
  bool all_pass() const;
};

/// Largest k >= 1 with (|F|^k - 1)^n <= budget, at least 1.
std::uint32_t default_search_depth(std::uint64_t field_size, std::size_t n, std::uint64_t budget = 1'000'000);

/// Checks H(i) through H(v) (H(iv)' when l(mu) > 1). Hypothesis failures are
/// verdicts; only malformed input raises.
HypothesisReport check_hypotheses(const LaurentPolynomial& f, const IVec& mu, std::optional<std::uint32_t> k_max = {},
                                  std::uint64_t ceiling = kDefaultCeiling);

/// Exhaustive search of (F_{|K|^k}^*)^n, k = 1..k_max, for a common zero of
/// the toric partials x_i d/dx_i of f restricted to `face`.
NondegVerdict face_nondegenerate(const LaurentPolynomial& f, const std::vector<IVec>& face,
                                 std::optional<std::uint32_t> k_max = {}, std::uint64_t ceiling = kDefaultCeiling);

/// True iff every toric partial of f restricted to the witness face vanishes
/// at the witness point (evaluated by direct powering).
bool verify_witness(const LaurentPolynomial& f, const NondegWitness& w);

/// Throws PreconditionFailed when p divides phi(mu) for a visible facet.
void require_h5(const Family& family);

/// Runs face_nondegenerate on every face at infinity of Delta(f, mu) for the
/// fiber at `point`. Refuses (PreconditionFailed) when H(v) fails or when a
/// supplied report does not pass; a degeneracy witness raises TheoremViolation.
NondegVerdict fiber_nondegenerate(const Family& family, const ClosedPoint& point,
                                  std::optional<std::uint32_t> k_max = {}, std::uint64_t ceiling = kDefaultCeiling,
                                  const HypothesisReport* report = nullptr);

}  // namespace tsl
