#pragma once

// Weight transform of semisimple principal fibrations: base factors
// (p_a, c_a, m_a, Scal_a) turn (v, w) into (p·v, w̃) with
//   p(x) = ∏ (⟨p_a, x⟩ + c_a)^{m_a},
//   w̃(x) = w(x) − Σ Scal_a / (⟨p_a, x⟩ + c_a).

#include <optional>
#include <vector>

#include "wkstab/polytope.hpp"
#include "wkstab/stability.hpp"
#include "wkstab/weights.hpp"

namespace wkstab {

struct BaseFactor {
  RVec p;     // integer entries
  Rational c;
  int m = 1;  // complex dimension of the base factor
  Rational scal;

  AffineFunctional affine() const { return {p, c}; }
};

struct FibrationData {
  std::vector<BaseFactor> factors;
};

struct FactorPositivity {
  int factor = 0;
  Rational min;
  RVec argmin;
  bool ok = false;
};

/// Exact minimum of each ⟨p_a, ·⟩ + c_a over the vertices of P.
std::vector<FactorPositivity> check_positivity(const LabeledPolytope& p, const FibrationData& data);

/// Throws NotPositive (location names the factor) or "input" for malformed
/// factors.
WeightPair fibration_weights(const LabeledPolytope& p, const FibrationData& data, const WeightExpr& v,
                             const WeightExpr& w, int grid_depth = 4, Exec exec = Exec::parallel);

struct FiberedStability {
  WeightPair transformed;
  StabilityReport stability;
  DestabilizerReport search;
};

FiberedStability fibered_stability(const LabeledPolytope& p, const FibrationData& data,
                                   const WeightExpr& v, const WeightExpr& w, std::optional<RVec> x0,
                                   int grid_depth, const SearchOptions& opts = {});

}  // namespace wkstab
