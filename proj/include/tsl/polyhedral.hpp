#pragma once

#include <cstddef>
#include <vector>

#include "tsl/rational.hpp"

namespace tsl::polyhedral {

/// Facet normals of the full-dimensional cone generated by `generators`,
/// each primitive integral with a.x >= 0 on the cone, sorted.
/// Throws NotFullDimensional when the generators do not span.
std::vector<IVec> cone_facets(const std::vector<QVec>& generators);

/// Indices of generators lying on a.x = 0.
std::vector<std::size_t> tight_set(const std::vector<QVec>& generators, const IVec& normal);

/// All faces of the cone other than the apex, as sorted index sets of the
/// generators they contain (the whole cone included).
std::vector<std::vector<std::size_t>> cone_faces(const std::vector<QVec>& generators,
                                                 const std::vector<IVec>& facets);

/// Generators spanning extreme rays (one index per ray, the smallest).
std::vector<std::size_t> extreme_generators(const std::vector<QVec>& generators,
                                            const std::vector<IVec>& facets);

/// Pulling triangulation of the cone into simplicial cones, each given by
/// `dim` generator indices.
std::vector<std::vector<std::size_t>> pulling_triangulation(const std::vector<QVec>& generators,
                                                            const std::vector<IVec>& facets);

/// Sum of |det| over a pulling triangulation: for generators on an affine
/// hyperplane at height 1 this is dim! times the volume of the pyramid over
/// their convex hull with apex at the origin.
Rational normalized_cone_volume(const std::vector<QVec>& generators, const std::vector<IVec>& facets);

}  // namespace tsl::polyhedral
