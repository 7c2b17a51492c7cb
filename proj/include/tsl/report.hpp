#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsl/cohomology.hpp"
#include "tsl/family.hpp"
#include "tsl/hypotheses.hpp"
#include "tsl/lattice_geometry.hpp"
#include "tsl/lfunctions.hpp"

namespace tsl {

using Json = nlohmann::json;

struct Limits {
  std::uint64_t ceiling = kDefaultCeiling;
  std::optional<std::uint32_t> k_max;
  std::optional<std::uint32_t> d_max;
};

/// A parsed problem file. Integer coefficients are read mod p; a list is a
/// coordinate vector in the power basis of the modulus.
struct Problem {
  FieldPtr field;
  LaurentPolynomial f;
  IVec mu;
  std::int64_t M = 1;
  std::vector<DeformationTerm> lower_order;
  std::size_t s = 0;  // number of t variables in the lower-order terms
  std::optional<OpSpec> op;
  Limits limits;
  /// FNV-1a of the normalised input text.
  std::string input_hash;
};

/// Throws ParseError naming the offending field.
Problem parse_problem(const Json& doc);
Problem load_problem(const std::filesystem::path& path);

Json to_json(const Rational& r);
Json to_json(const IVec& v);
Json to_json(const QVec& v);
Json to_json(const Cyclotomic& c);
Json to_json(const Series& s);
Json to_json(const NewtonPolygon& np);
Json to_json(const FieldPtr& field);
Json to_json(const FieldElement& x);
Json to_json(const ClosedPoint& pt);

Json geometry_json(const GeometryContext& ctx);
Json relative_polytope_json(const RelativePolytope& up);
Json nondeg_json(const NondegVerdict& v);
Json hypotheses_json(const HypothesisReport& rep);
Json basis_json(const BasisB& basis);
Json fiber_json(const FiberLReport& rep);
Json global_json(const GlobalLTruncation& g);
Json degree_bound_json(const DegreeBoundReport& rep);

}  // namespace tsl
