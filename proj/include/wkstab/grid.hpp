#pragma once

#include <vector>

#include "wkstab/polytope.hpp"

namespace wkstab {

/// Deterministic sample points: for each simplex, every point whose
/// barycentric coordinates are multiples of 2^-depth. Shared points are
/// merged. `mesh` bounds the distance from any point of the union to the
/// nearest sample (longest refined edge).
struct SampleGrid {
  std::vector<RVec> exact;
  std::vector<std::vector<double>> points;
  double mesh = 0;
  int depth = 0;
};

SampleGrid barycentric_grid(const std::vector<Simplex>& simplices, int depth);

inline SampleGrid barycentric_grid(const LabeledPolytope& p, int depth) {
  return barycentric_grid(p.triangulate(), depth);
}

}  // namespace wkstab
