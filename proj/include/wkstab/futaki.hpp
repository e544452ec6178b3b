#pragma once

// The toric weighted Donaldson–Futaki invariant
//   F_{v,w}(f) = 2 ∫_{∂P} f v dσ − ∫_P f w dx
// on affine and piecewise-linear convex test functions, the weighted
// extremal affine function, and the normalisation of w.

#include <optional>
#include <vector>

#include "wkstab/polytope.hpp"
#include "wkstab/quadrature.hpp"
#include "wkstab/weight_expr.hpp"

namespace wkstab {

/// f(x) = max_i ℓ_i(x).
struct PLConvexFunction {
  std::vector<AffineFunctional> pieces;

  static PLConvexFunction affine(const AffineFunctional& l) { return {{l}}; }

  int dim() const { return pieces.front().dim(); }
  Rational operator()(const RVec& x) const;
  double operator()(std::span<const double> x) const;
  /// Same function with duplicate pieces removed (first occurrence kept).
  PLConvexFunction deduplicated() const;
};

struct FutakiReport {
  double value = 0;
  double error_bound = 0;
  double boundary_term = 0;  // ∫_{∂P} f v dσ
  double interior_term = 0;  // ∫_P f w dx
  bool exact = false;
  std::optional<Rational> exact_value;
  std::optional<Rational> exact_boundary;
  std::optional<Rational> exact_interior;
  bool degenerate_pieces = false;
};

/// Region of P where piece `piece` attains the max (measure-zero cells dropped).
struct PLCell {
  Polytope cell;
  int piece;
};

std::vector<PLCell> pl_cells(const Polytope& p, const PLConvexFunction& f);

FutakiReport futaki_affine(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                           const AffineFunctional& ell, const QuadratureOptions& opts = {});

/// Integrates piecewise over the cells of f; facets are split by the same cells.
FutakiReport futaki_pl(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                       const PLConvexFunction& f, const QuadratureOptions& opts = {});

/// ∫_P f dx for piecewise-linear f, exact.
Rational integrate_pl(const Polytope& p, const PLConvexFunction& f, Exec exec = Exec::parallel);

struct ExtremalResult {
  AffineFunctional ell;
  bool exact = false;
  std::vector<double> residuals;  // F_{v, ℓ w0}(e_α), α = 0..n
  double condition = 1;
  bool ill_conditioned = false;
  bool verified = false;  // every residual within 10 tol
};

/// Solves the Gram system M c = b, M_{αβ} = ∫ e_α e_β w0 dx,
/// b_α = 2 ∫_{∂P} e_α v dσ in the basis {1, x_1, ..., x_n}.
/// Throws NotPositive when v or w0 fails positivity on P.
ExtremalResult extremal_affine(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w0,
                               const QuadratureOptions& opts = {}, int grid_depth = 4);

/// F_{v,w}(1).
FutakiReport normalization_residual(const LabeledPolytope& p, const WeightExpr& v,
                                    const WeightExpr& w, const QuadratureOptions& opts = {});

/// w + κ with κ = F_{v,w}(1) / vol(P).
WeightExpr normalize_w(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                       const QuadratureOptions& opts = {});

}  // namespace wkstab
