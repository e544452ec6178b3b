#include "wkstab/polytope.hpp"

#include <algorithm>
#include <set>

#include "wkstab/error.hpp"

namespace wkstab {

namespace {

// Calls f(subset) for every k-subset of {0..m-1} in lexicographic order.
template <class F>
void for_each_subset(int m, int k, F&& f) {
  if (k > m) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<RVec> points_of(const std::vector<RVec>& all, const std::vector<int>& ids) {
  std::vector<RVec> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(all[i]);
  return out;
}

}  // namespace

Rational Simplex::volume() const {
  const std::size_t n = points.size() - 1;
  RMatrix m(n, RVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) m[i][k] = points[i + 1][k] - points[0][k];
  return abs(determinant(std::move(m))) / factorial(static_cast<int>(n));
}

RVec Simplex::centroid() const {
  RVec c(points.front().size(), Rational(0));
  for (const auto& p : points)
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += p[k];
  for (auto& ck : c) ck /= static_cast<long>(points.size());
  return c;
}

std::vector<RVec> enumerate_vertices(int n, const std::vector<AffineFunctional>& halfspaces) {
  std::vector<RVec> found;
  const int m = static_cast<int>(halfspaces.size());
  for_each_subset(m, n, [&](const std::vector<int>& subset) {
    RMatrix a;
    RVec b;
    a.reserve(n);
    for (int j : subset) {
      a.push_back(halfspaces[j].u);
      b.push_back(-halfspaces[j].c);
    }
    auto x = solve(std::move(a), std::move(b));
    if (!x) return;
    for (const auto& h : halfspaces)
      if (h(*x) < 0) return;
    found.push_back(std::move(*x));
  });
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

Polytope::Polytope(int n, std::vector<AffineFunctional> halfspaces, std::vector<RVec> vertices)
    : n_(n), halfspaces_(std::move(halfspaces)), vertices_(std::move(vertices)) {
  incidence_.assign(vertices_.size(), std::vector<char>(halfspaces_.size(), 0));
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    for (std::size_t j = 0; j < halfspaces_.size(); ++j)
      incidence_[v][j] = halfspaces_[j](vertices_[v]) == 0;
}

std::optional<Polytope> Polytope::from_halfspaces(int n, std::vector<AffineFunctional> halfspaces) {
  std::vector<AffineFunctional> hs;
  for (auto& h : halfspaces) {
    if (h.is_constant()) {
      if (h.c < 0) return std::nullopt;
      continue;
    }
    hs.push_back(std::move(h));
  }
  auto verts = enumerate_vertices(n, hs);
  if (static_cast<int>(verts.size()) < n + 1 || affine_dimension(verts) < n) return std::nullopt;

  // Keep one half-space per facet.
  std::vector<AffineFunctional> kept;
  std::set<std::vector<int>> seen;
  for (auto& h : hs) {
    std::vector<int> active;
    for (int v = 0; v < static_cast<int>(verts.size()); ++v)
      if (h(verts[v]) == 0) active.push_back(v);
    if (static_cast<int>(active.size()) < n) continue;
    if (affine_dimension(points_of(verts, active)) != n - 1) continue;
    if (!seen.insert(active).second) continue;
    kept.push_back(std::move(h));
  }
  return Polytope(n, std::move(kept), std::move(verts));
}

void Polytope::pull(const std::vector<int>& face, int k, std::vector<int>& prefix,
                    std::vector<std::vector<int>>& out) const {
  const int apex = face.front();
  if (k == 0) {
    auto s = prefix;
    s.push_back(apex);
    out.push_back(std::move(s));
    return;
  }
  std::set<std::vector<int>> subfaces;
  for (std::size_t j = 0; j < halfspaces_.size(); ++j) {
    std::vector<int> sub;
    for (int v : face)
      if (incidence_[v][j]) sub.push_back(v);
    if (sub.size() == face.size() || static_cast<int>(sub.size()) < k) continue;
    if (std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
    if (subfaces.count(sub)) continue;
    if (affine_dimension(points_of(vertices_, sub)) != k - 1) continue;
    subfaces.insert(std::move(sub));
  }
  prefix.push_back(apex);
  for (const auto& sub : subfaces) pull(sub, k - 1, prefix, out);
  prefix.pop_back();
}

std::vector<Simplex> Polytope::triangulate() const {
  std::vector<int> all(vertices_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  std::vector<std::vector<int>> ids;
  std::vector<int> prefix;
  pull(all, n_, prefix, ids);
  std::vector<Simplex> out;
  out.reserve(ids.size());
  for (const auto& s : ids) out.push_back(Simplex{points_of(vertices_, s)});
  return out;
}

Rational Polytope::volume() const {
  Rational v = 0;
  for (const auto& s : triangulate()) v += s.volume();
  return v;
}

RVec Polytope::barycenter() const {
  RVec c(n_, Rational(0));
  Rational total = 0;
  for (const auto& s : triangulate()) {
    Rational v = s.volume();
    RVec sc = s.centroid();
    for (int k = 0; k < n_; ++k) c[k] += v * sc[k];
    total += v;
  }
  for (auto& ck : c) ck /= total;
  return c;
}

RVec Polytope::vertex_average() const {
  RVec c(n_, Rational(0));
  for (const auto& v : vertices_)
    for (int k = 0; k < n_; ++k) c[k] += v[k];
  for (auto& ck : c) ck /= static_cast<long>(vertices_.size());
  return c;
}

bool Polytope::is_interior(const RVec& x) const {
  if (static_cast<int>(x.size()) != n_) return false;
  for (const auto& h : halfspaces_)
    if (h(x) <= 0) return false;
  return true;
}

std::vector<std::vector<RVec>> Polytope::face_triangulation(const AffineFunctional& support) const {
  std::vector<int> face;
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
    if (support(vertices_[v]) == 0) face.push_back(v);
  if (static_cast<int>(face.size()) < n_ || affine_dimension(points_of(vertices_, face)) != n_ - 1)
    return {};
  std::vector<std::vector<int>> ids;
  std::vector<int> prefix;
  pull(face, n_ - 1, prefix, ids);
  std::vector<std::vector<RVec>> out;
  out.reserve(ids.size());
  for (const auto& s : ids) out.push_back(points_of(vertices_, s));
  return out;
}

LabeledPolytope LabeledPolytope::from_facets(int n, std::vector<AffineFunctional> facets) {
  if (n < 1) throw Error("input", "dimension must be positive");
  if (static_cast<int>(facets.size()) < n + 1)
    throw Error("input", "a bounded polytope in dimension " + std::to_string(n) +
                             " needs at least " + std::to_string(n + 1) + " facets");
  RMatrix normals;
  for (std::size_t j = 0; j < facets.size(); ++j) {
    if (facets[j].dim() != n)
      throw Error("input", "facet has wrong dimension", "facets[" + std::to_string(j) + "]");
    if (facets[j].is_constant())
      throw Error("input", "facet has zero normal", "facets[" + std::to_string(j) + "]");
    normals.push_back(facets[j].u);
  }
  if (rank(normals) < n) throw Error("Unbounded", "facet normals do not span R^n");

  auto verts = enumerate_vertices(n, facets);
  if (verts.empty()) throw Error("Empty", "no point satisfies every facet inequality");

  // The recession cone is pointed; it is nonzero iff one of its extreme rays
  // (a kernel direction of n-1 normals) lies in every half-space.
  bool unbounded = false;
  for_each_subset(static_cast<int>(facets.size()), n - 1, [&](const std::vector<int>& subset) {
    if (unbounded) return;
    RMatrix rows;
    for (int j : subset) rows.push_back(facets[j].u);
    auto d = kernel_vector(rows, n);
    if (!d) return;
    for (int sign : {1, -1}) {
      bool ray = true;
      for (const auto& f : facets)
        if (sign * dot(f.u, *d) < 0) {
          ray = false;
          break;
        }
      if (ray) unbounded = true;
    }
  });
  if (unbounded) throw Error("Unbounded", "the region contains a ray");
  if (affine_dimension(verts) < n) throw Error("LowerDimensional", "the polytope has empty interior");

  for (std::size_t j = 0; j < facets.size(); ++j) {
    std::vector<RVec> on;
    for (const auto& v : verts)
      if (facets[j](v) == 0) on.push_back(v);
    if (affine_dimension(on) != n - 1)
      throw Error("RedundantFacet", "label " + facets[j].str() + " does not define a facet",
                  "facets[" + std::to_string(j) + "]");
  }
  auto p = Polytope::from_halfspaces(n, facets);
  if (!p) throw Error("LowerDimensional", "the polytope has empty interior");
  return LabeledPolytope(std::move(facets), std::move(*p));
}

bool LabeledPolytope::is_interior(const RVec& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (const auto& f : facets_)
    if (f(x) <= 0) return false;
  return true;
}

DelzantReport validate_delzant(const LabeledPolytope& p) {
  const int n = p.dim();
  const auto& facets = p.facets();
  for (std::size_t j = 0; j < facets.size(); ++j) {
    if (!facets[j].is_primitive_integer()) {
      DelzantReport r;
      r.ok = false;
      r.facet = static_cast<int>(j);
      r.reason = "normal of facet " + std::to_string(j) + " is not a primitive integer vector";
      return r;
    }
  }
  for (const auto& v : p.vertices()) {
    std::vector<int> active;
    for (std::size_t j = 0; j < facets.size(); ++j)
      if (facets[j](v) == 0) active.push_back(static_cast<int>(j));
    DelzantReport r;
    r.vertex = v;
    if (static_cast<int>(active.size()) != n) {
      r.ok = false;
      r.reason = "vertex lies on " + std::to_string(active.size()) + " facets, expected " +
                 std::to_string(n);
      return r;
    }
    RMatrix m;
    for (int j : active) m.push_back(facets[j].u);
    Rational det = determinant(m);
    if (abs(det) != 1) {
      r.ok = false;
      r.facet = active.back();
      r.determinant = det;
      r.reason = "normals at vertex have determinant " + det.get_str();
      return r;
    }
  }
  return {};
}

ClipResult clip(const Polytope& p, const AffineFunctional& h) {
  auto pos = p.halfspaces();
  pos.push_back(h);
  auto neg = p.halfspaces();
  neg.push_back(-h);
  return {Polytope::from_halfspaces(p.dim(), std::move(pos)),
          Polytope::from_halfspaces(p.dim(), std::move(neg))};
}

Rational ConeDecomposition::Cone::volume() const {
  Rational v = 0;
  for (const auto& s : simplices) v += s.volume();
  return v;
}

ConeDecomposition cone_decomposition(const LabeledPolytope& p, std::optional<RVec> x0) {
  RVec apex = x0 ? std::move(*x0) : p.barycenter();
  if (!p.is_interior(apex)) throw Error("NotInterior", "base point is not strictly interior");
  ConeDecomposition out;
  out.base_point = apex;
  for (std::size_t j = 0; j < p.facets().size(); ++j) {
    ConeDecomposition::Cone cone{static_cast<int>(j), {}};
    for (auto& face : p.polytope().face_triangulation(p.facets()[j])) {
      face.push_back(apex);
      cone.simplices.push_back(Simplex{std::move(face)});
    }
    out.cones.push_back(std::move(cone));
  }
  return out;
}

RVec FacetChart::embed(const RVec& t) const {
  RVec x = origin;
  for (std::size_t r = 0; r < x.size(); ++r)
    for (std::size_t k = 0; k < t.size(); ++k) x[r] += basis[r][k] * t[k];
  return x;
}

MultiPoly FacetChart::pull_back(const MultiPoly& q) const {
  const int n = static_cast<int>(origin.size());
  const int m = n - 1;
  std::vector<MultiPoly> sub;
  sub.reserve(n);
  for (int r = 0; r < n; ++r) {
    MultiPoly s = MultiPoly::constant(m, origin[r]);
    for (int k = 0; k < m; ++k) s.add_term([&] {
      Exponent e(m, 0);
      e[k] = 1;
      return e;
    }(), basis[r][k]);
    sub.push_back(std::move(s));
  }
  return q.compose(sub);
}

FacetChart facet_chart(const LabeledPolytope& p, int j) {
  if (j < 0 || j >= static_cast<int>(p.facets().size()))
    throw Error("InvalidFacet", "facet index " + std::to_string(j) + " out of range");
  const int n = p.dim();
  const auto& L = p.facets()[j];
  FacetChart chart;
  chart.facet = j;
  int m = 0;
  while (L.u[m] == 0) ++m;
  chart.eliminated = m;
  chart.origin.assign(n, Rational(0));
  chart.origin[m] = -L.c / L.u[m];
  chart.basis.assign(n, RVec(n - 1, Rational(0)));
  for (int i = 0, k = 0; i < n; ++i) {
    if (i == m) continue;
    chart.basis[i][k] = 1;
    chart.basis[m][k] = -L.u[i] / L.u[m];
    ++k;
  }
  chart.scale = 1 / abs(L.u[m]);
  if (n == 1) return chart;

  std::vector<AffineFunctional> pulled;
  for (std::size_t i = 0; i < p.facets().size(); ++i) {
    if (static_cast<int>(i) == j) continue;
    const auto& f = p.facets()[i];
    AffineFunctional g(RVec(n - 1, Rational(0)), f(chart.origin));
    for (int k = 0; k < n - 1; ++k)
      for (int r = 0; r < n; ++r) g.u[k] += f.u[r] * chart.basis[r][k];
    pulled.push_back(std::move(g));
  }
  chart.domain = Polytope::from_halfspaces(n - 1, std::move(pulled));
  if (!chart.domain) throw Error("InvalidFacet", "facet " + std::to_string(j) + " is degenerate");
  return chart;
}

Rational sigma_measure(const std::vector<RVec>& face_simplex, const AffineFunctional& normal) {
  const int n = normal.dim();
  int m = 0;
  while (normal.u[m] == 0) ++m;
  RMatrix rows;
  for (int i = 1; i < n; ++i) {
    RVec d(n);
    for (int k = 0; k < n; ++k) d[k] = face_simplex[i][k] - face_simplex[0][k];
    rows.push_back(std::move(d));
  }
  RVec e(n, Rational(0));
  e[m] = 1 / normal.u[m];
  rows.push_back(std::move(e));
  return abs(determinant(std::move(rows))) / factorial(n - 1);
}

std::vector<MeasuredSimplex> boundary_simplices(const Polytope& cell,
                                                const std::vector<AffineFunctional>& labels) {
  std::vector<MeasuredSimplex> out;
  for (const auto& label : labels)
    for (auto& face : cell.face_triangulation(label)) {
      Rational mu = sigma_measure(face, label);
      out.push_back(MeasuredSimplex{std::move(face), std::move(mu)});
    }
  return out;
}

std::vector<MeasuredSimplex> measured(const std::vector<Simplex>& simplices) {
  std::vector<MeasuredSimplex> out;
  out.reserve(simplices.size());
  for (const auto& s : simplices) out.push_back(MeasuredSimplex{s.points, s.volume()});
  return out;
}

}  // namespace wkstab
