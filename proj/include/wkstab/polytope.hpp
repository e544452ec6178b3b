#pragma once

// Exact rational polytopes: labeled Delzant polytopes, their triangulations,
// cone decompositions, facet charts, and half-space clipping.

#include <optional>
#include <string>
#include <vector>

#include "wkstab/affine.hpp"
#include "wkstab/multipoly.hpp"
#include "wkstab/rational.hpp"

namespace wkstab {

/// Full-dimensional simplex: n+1 points in R^n.
struct Simplex {
  std::vector<RVec> points;

  Rational volume() const;
  RVec centroid() const;
};

/// A k-simplex embedded in R^n (k+1 points) together with its measure.
/// For k = n the measure is Lebesgue volume; for boundary faces it is the
/// lattice measure dσ.
struct MeasuredSimplex {
  std::vector<RVec> points;
  Rational measure;
};

/// Bounded rational polytope with nonempty interior, stored both as
/// half-spaces h(x) >= 0 (irredundant) and as its exact vertex list.
class Polytope {
 public:
  /// Returns nullopt when the region is empty or has empty interior. The
  /// region must be bounded (true for any subset of a bounded polytope).
  static std::optional<Polytope> from_halfspaces(int n, std::vector<AffineFunctional> halfspaces);

  int dim() const { return n_; }
  const std::vector<AffineFunctional>& halfspaces() const { return halfspaces_; }
  const std::vector<RVec>& vertices() const { return vertices_; }

  /// Pulling triangulation: each face is coned from its first vertex.
  std::vector<Simplex> triangulate() const;
  Rational volume() const;
  RVec barycenter() const;
  RVec vertex_average() const;
  bool is_interior(const RVec& x) const;

  /// Triangulation of the face {support = 0} into (n-1)-simplices (n points
  /// each). Empty when that face is not (n-1)-dimensional. `support` must be
  /// nonnegative on the polytope.
  std::vector<std::vector<RVec>> face_triangulation(const AffineFunctional& support) const;

 private:
  Polytope(int n, std::vector<AffineFunctional> halfspaces, std::vector<RVec> vertices);
  void pull(const std::vector<int>& face, int k, std::vector<int>& prefix,
            std::vector<std::vector<int>>& out) const;

  int n_ = 0;
  std::vector<AffineFunctional> halfspaces_;
  std::vector<RVec> vertices_;
  std::vector<std::vector<char>> incidence_;  // [vertex][halfspace]
};

/// Solves every n-subset of the half-space boundaries and keeps the feasible
/// points. Sorted lexicographically, duplicates merged.
std::vector<RVec> enumerate_vertices(int n, const std::vector<AffineFunctional>& halfspaces);

/// A Delzant polytope given by its ordered facet labels L_1..L_d.
class LabeledPolytope {
 public:
  /// Throws Error with code Unbounded, Empty, LowerDimensional, or
  /// RedundantFacet; "input" for malformed facet data.
  static LabeledPolytope from_facets(int n, std::vector<AffineFunctional> facets);

  int dim() const { return polytope_.dim(); }
  const std::vector<AffineFunctional>& facets() const { return facets_; }
  const Polytope& polytope() const { return polytope_; }
  const std::vector<RVec>& vertices() const { return polytope_.vertices(); }

  std::vector<Simplex> triangulate() const { return polytope_.triangulate(); }
  Rational volume() const { return polytope_.volume(); }
  RVec barycenter() const { return polytope_.barycenter(); }
  bool is_interior(const RVec& x) const;

 private:
  LabeledPolytope(std::vector<AffineFunctional> facets, Polytope p)
      : facets_(std::move(facets)), polytope_(std::move(p)) {}

  std::vector<AffineFunctional> facets_;
  Polytope polytope_;
};

struct DelzantReport {
  bool ok = true;
  std::string reason;
  std::optional<RVec> vertex;
  std::optional<int> facet;
  std::optional<Rational> determinant;
};

DelzantReport validate_delzant(const LabeledPolytope& p);

struct ClipResult {
  std::optional<Polytope> positive;  // P ∩ {h >= 0}, nullopt when measure zero
  std::optional<Polytope> negative;  // P ∩ {h <= 0}
};

ClipResult clip(const Polytope& p, const AffineFunctional& h);
inline ClipResult clip(const LabeledPolytope& p, const AffineFunctional& h) {
  return clip(p.polytope(), h);
}

struct ConeDecomposition {
  struct Cone {
    int facet;
    std::vector<Simplex> simplices;
    Rational volume() const;
  };
  RVec base_point;
  std::vector<Cone> cones;
};

/// One cone per facet with apex x0 (default: barycenter). Throws NotInterior.
ConeDecomposition cone_decomposition(const LabeledPolytope& p, std::optional<RVec> x0 = {});

/// Parametrisation of facet F_j by the coordinates other than `eliminated`.
/// ∫_{F_j} g dσ = scale * ∫_domain g(embed(t)) dt. For n = 1 the facet is a
/// point, domain is empty and the integral is scale * g(origin).
struct FacetChart {
  int facet = 0;
  int eliminated = 0;
  std::optional<Polytope> domain;
  RVec origin;
  RMatrix basis;  // n rows, n-1 columns
  Rational scale;

  RVec embed(const RVec& t) const;
  MultiPoly pull_back(const MultiPoly& q) const;
};

/// Throws InvalidFacet for an out-of-range index.
FacetChart facet_chart(const LabeledPolytope& p, int j);

/// Lattice measure dσ of an (n-1)-simplex lying in {normal = 0}, where the
/// measure is normalised by d(normal) ∧ dσ = -dx.
Rational sigma_measure(const std::vector<RVec>& face_simplex, const AffineFunctional& normal);

/// Every boundary face of `cell` lying on one of `labels`, triangulated and
/// weighted by the lattice measure of that label.
std::vector<MeasuredSimplex> boundary_simplices(const Polytope& cell,
                                                const std::vector<AffineFunctional>& labels);

std::vector<MeasuredSimplex> measured(const std::vector<Simplex>& simplices);

}  // namespace wkstab
