#pragma once

// Cone-wise sufficient condition for uniform K-stability, normalised test
// functions, stability ratios, and a destabiliser search over one-crease
// piecewise-linear functions.

#include <optional>
#include <vector>

#include "wkstab/futaki.hpp"
#include "wkstab/kernels.hpp"
#include "wkstab/polytope.hpp"
#include "wkstab/weight_expr.hpp"

namespace wkstab {

struct StabilityReport {
  enum class Verdict { holds, inconclusive };

  Verdict verdict = Verdict::inconclusive;
  /// Minimum of the condition expression over every cone and sample.
  double margin = 0;
  /// margin - lipschitz * mesh; the verdict is Holds only when both this and
  /// the margin are nonnegative.
  double certified_lower_bound = 0;
  bool certified = false;
  double lipschitz = 0;  // sampled max |∇Φ|
  double mesh = 0;
  std::vector<double> argmin;
  int cone_index = -1;  // -1 for the single-region (Fano) scan
  std::vector<double> cone_minima;
  int grid_depth = 0;
  RVec x0;
};

/// Evaluates Φ_j(x) = ((n+1) v(x) + ⟨∇v(x), x − x0⟩) / L_j(x0) − w(x)/2 on the
/// barycentric grid of each cone P_j. Throws NotInterior, DomainError.
StabilityReport sufficient_condition(const LabeledPolytope& p, const WeightExpr& v,
                                     const WeightExpr& w, std::optional<RVec> x0, int grid_depth,
                                     Exec exec = Exec::parallel);

/// Same scan over all of P with L_j(x0) replaced by the scale t > 0.
StabilityReport fano_condition(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                               std::optional<RVec> x0, const Rational& t, int grid_depth,
                               Exec exec = Exec::parallel);

/// f − a, where a is the active piece at x0 with the lexicographically
/// smallest gradient. The result vanishes at x0 and is ≥ 0.
PLConvexFunction normalize_f(const PLConvexFunction& f, const RVec& x0);

struct RatioResult {
  double ratio = 0;
  std::optional<Rational> exact_ratio;
  FutakiReport futaki;
  Rational l1_norm;  // ∫_P f* dx
};

/// F_{v,w}(f) / ‖f*‖_{L¹}. Throws ZeroTestFunction when f* ≡ 0.
RatioResult stability_ratio(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                            const PLConvexFunction& f, std::optional<RVec> x0,
                            const QuadratureOptions& opts = {});

struct SearchOptions {
  int slope_bound = 3;  // H
  int offsets = 16;     // K
  double threshold = 0;
  QuadratureOptions quad;
};

/// max(0, ⟨u,x⟩ + c) for primitive integer u with ‖u‖∞ ≤ H and K offsets c
/// whose crease splits the range of ⟨u,·⟩ over P into K+1 equal parts.
std::vector<PLConvexFunction> simple_pl_family(const LabeledPolytope& p, int slope_bound, int offsets);

struct DestabilizerReport {
  std::optional<PLConvexFunction> best_f;
  double best_ratio = 0;
  std::optional<Rational> best_exact_ratio;
  std::size_t family_size = 0;
  std::size_t below_threshold = 0;
  bool all_above_threshold = true;  // every ratio > threshold
  double threshold = 0;
  std::vector<double> ratios;  // enumeration order
  RVec x0;
};

DestabilizerReport destabilizer_search(const LabeledPolytope& p, const WeightExpr& v,
                                       const WeightExpr& w, std::optional<RVec> x0,
                                       const SearchOptions& opts = {});

}  // namespace wkstab
