#include "tsl/polyhedral.hpp"

#include <algorithm>
#include <set>

#include "tsl/errors.hpp"

namespace tsl::polyhedral {

namespace {

std::vector<QVec> rows_of(const std::vector<QVec>& gens, const std::vector<std::size_t>& idx) {
  std::vector<QVec> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(gens[i]);
  return out;
}

QVec normalized(const QVec& v) { return to_qvec(primitive_integral(v)); }

}  // namespace

std::vector<IVec> cone_facets(const std::vector<QVec>& generators) {
  if (generators.empty()) throw Error(ErrorKind::NotFullDimensional, "no generators");
  const std::size_t n = generators[0].size();

  // Greedy basis among the generators.
  std::vector<std::size_t> basis;
  std::vector<QVec> basis_rows;
  for (std::size_t i = 0; i < generators.size() && basis.size() < n; ++i) {
    auto trial = basis_rows;
    trial.push_back(generators[i]);
    if (rank(trial) == trial.size()) {
      basis.push_back(i);
      basis_rows = std::move(trial);
    }
  }
  if (basis.size() < n) throw Error(ErrorKind::NotFullDimensional, "generators span a proper subspace");

  // Dual cone of the basis: the columns of its inverse.
  std::vector<QVec> rays;
  for (std::size_t j = 0; j < n; ++j) {
    QVec e(n, Rational(0));
    e[j] = 1;
    auto h = solve_unique(basis_rows, e);
    rays.push_back(normalized(*h));
  }
  std::vector<std::size_t> processed = basis;

  for (std::size_t c = 0; c < generators.size(); ++c) {
    if (std::find(basis.begin(), basis.end(), c) != basis.end()) continue;
    const auto& g = generators[c];
    std::vector<Rational> val;
    val.reserve(rays.size());
    bool any_negative = false;
    for (const auto& h : rays) {
      val.push_back(dot(g, h));
      if (val.back() < 0) any_negative = true;
    }
    if (!any_negative) {
      processed.push_back(c);
      continue;
    }
    std::vector<QVec> next;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (val[i] >= 0) next.push_back(rays[i]);
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (val[i] <= 0) continue;
      for (std::size_t j = 0; j < rays.size(); ++j) {
        if (val[j] >= 0) continue;
        std::vector<QVec> common;
        for (auto k : processed)
          if (dot(generators[k], rays[i]) == 0 && dot(generators[k], rays[j]) == 0) common.push_back(generators[k]);
        if (n < 2 || common.size() + 2 < n || rank(common) != n - 2) continue;
        QVec h(n);
        for (std::size_t t = 0; t < n; ++t) h[t] = val[i] * rays[j][t] - val[j] * rays[i][t];
        next.push_back(normalized(h));
      }
    }
    rays = std::move(next);
    processed.push_back(c);
  }

  std::set<IVec> unique;
  for (const auto& h : rays) unique.insert(primitive_integral(h));
  return {unique.begin(), unique.end()};
}

std::vector<std::size_t> tight_set(const std::vector<QVec>& generators, const IVec& normal) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (dot(generators[i], normal) == 0) out.push_back(i);
  return out;
}

std::vector<std::vector<std::size_t>> cone_faces(const std::vector<QVec>& generators,
                                                 const std::vector<IVec>& facets) {
  std::vector<std::size_t> all(generators.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::set<std::vector<std::size_t>> seen{all};
  std::vector<std::vector<std::size_t>> queue{all};
  std::vector<std::vector<std::size_t>> tights;
  for (const auto& a : facets) tights.push_back(tight_set(generators, a));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto face = queue[head];
    for (const auto& t : tights) {
      std::vector<std::size_t> sub;
      std::set_intersection(face.begin(), face.end(), t.begin(), t.end(), std::back_inserter(sub));
      if (sub.empty() || sub.size() == face.size()) continue;
      if (seen.insert(sub).second) queue.push_back(sub);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::size_t> extreme_generators(const std::vector<QVec>& generators, const std::vector<IVec>& facets) {
  if (generators.empty()) return {};
  const std::size_t n = generators[0].size();
  std::vector<std::size_t> out;
  std::vector<QVec> seen_rays;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    std::vector<QVec> normals;
    for (const auto& a : facets)
      if (dot(generators[i], a) == 0) normals.push_back(to_qvec(a));
    if (rank(normals) != n - 1) continue;
    QVec ray = normalized(generators[i]);
    if (std::find(seen_rays.begin(), seen_rays.end(), ray) != seen_rays.end()) continue;
    seen_rays.push_back(ray);
    out.push_back(i);
  }
  return out;
}

namespace {

void triangulate_face(const std::vector<QVec>& gens, const std::vector<std::vector<std::size_t>>& tights,
                      const std::vector<std::size_t>& face, std::size_t dim,
                      std::vector<std::vector<std::size_t>>& out) {
  if (dim == 1) {
    out.push_back({face.front()});
    return;
  }
  const std::size_t apex = face.front();
  std::set<std::vector<std::size_t>> subfaces;
  for (const auto& t : tights) {
    std::vector<std::size_t> sub;
    std::set_intersection(face.begin(), face.end(), t.begin(), t.end(), std::back_inserter(sub));
    if (sub.empty() || sub.size() == face.size()) continue;
    if (std::binary_search(sub.begin(), sub.end(), apex)) continue;
    if (rank(rows_of(gens, sub)) != dim - 1) continue;
    subfaces.insert(sub);
  }
  for (const auto& sub : subfaces) {
    std::vector<std::vector<std::size_t>> part;
    triangulate_face(gens, tights, sub, dim - 1, part);
    for (auto& simplex : part) {
      simplex.push_back(apex);
      out.push_back(std::move(simplex));
    }
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> pulling_triangulation(const std::vector<QVec>& generators,
                                                            const std::vector<IVec>& facets) {
  if (generators.empty()) return {};
  const std::size_t n = generators[0].size();
  std::vector<std::size_t> all(generators.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> tights;
  for (const auto& a : facets) tights.push_back(tight_set(generators, a));
  std::vector<std::vector<std::size_t>> out;
  triangulate_face(generators, tights, all, n, out);
  return out;
}

Rational normalized_cone_volume(const std::vector<QVec>& generators, const std::vector<IVec>& facets) {
  Rational total = 0;
  for (const auto& simplex : pulling_triangulation(generators, facets)) {
    Rational det = determinant(rows_of(generators, simplex));
    total += det < 0 ? Rational(-det) : det;
  }
  return total;
}

}  // namespace tsl::polyhedral
