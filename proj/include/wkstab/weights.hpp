#pragma once

// Weight families, positivity and log-concavity checks, and Bernstein
// approximation of weights on a polytope.

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wkstab/kernels.hpp"
#include "wkstab/polytope.hpp"
#include "wkstab/weight_expr.hpp"

namespace wkstab {

struct PositivityStatus {
  enum class Kind { certified, sampled_positive, failed };
  Kind kind = Kind::certified;
  double min = 0;
  std::vector<double> argmin;

  bool positive() const { return kind != Kind::failed; }
};

struct LogConcavityStatus {
  enum class Kind { certified, sampled_concave, failed };
  Kind kind = Kind::certified;
  double max_eigenvalue = 0;  // of the Hessian of log v over the samples
  std::vector<double> at;

  bool concave() const { return kind != Kind::failed; }
};

struct WeightPair {
  WeightExpr v;
  WeightExpr w;
  std::optional<PositivityStatus> v_positive;
  std::optional<LogConcavityStatus> v_log_concave;
  std::optional<double> normalization_residual;
};

/// w = 2 (n v + ⟨∇v, x⟩), the weight turning (v, w)-cscK metrics into v-solitons.
WeightExpr soliton_w(const WeightExpr& v, int n);

/// n + ⟨∇v, x⟩ / v.
WeightExpr tilde_v(const WeightExpr& v, int n);

/// Cone weights v = ℓ^(-n-1), w = a ℓ^(-n-2). Throws NotPositive unless
/// ℓ > 0 at every vertex of p.
WeightPair cone_weights(const AffineFunctional& ell, const Rational& a, const LabeledPolytope& p);

/// Structural positivity proof on p (affine bases checked at vertices).
bool certify_positive(const WeightExpr& e, const Polytope& p);
/// Structural log-concavity proof on p.
bool certify_log_concave(const WeightExpr& e, const Polytope& p);

PositivityStatus is_positive_on(const WeightExpr& e, const LabeledPolytope& p, int grid_depth,
                                Exec exec = Exec::parallel);

/// Maximum eigenvalue of the Hessian of log e over the grid, with location.
/// Throws DomainError where e is not positive.
LogConcavityStatus sampled_log_concavity(const WeightExpr& e, const LabeledPolytope& p,
                                         int grid_depth, double tol = 1e-9,
                                         Exec exec = Exec::parallel);

LogConcavityStatus is_log_concave_on(const WeightExpr& e, const LabeledPolytope& p, int grid_depth,
                                     double tol = 1e-9, Exec exec = Exec::parallel);

/// Product of closed intervals [lo_i, hi_i].
using Box = std::vector<std::pair<Rational, Rational>>;

Box bounding_box(const Polytope& p);

using Sampler = std::function<double(std::span<const double>)>;

/// Tensor-product Bernstein polynomial of degree d in each coordinate.
/// The sampler is called once per node and must be safe to call concurrently.
MultiPoly bernstein_approx(const Sampler& f, const Box& box, int degree,
                           Exec exec = Exec::parallel);

/// max |e1 - e2| over the grid of p at the given depth.
double sup_error_on_grid(const WeightExpr& e1, const WeightExpr& e2, const LabeledPolytope& p,
                         int grid_depth, Exec exec = Exec::parallel);

}  // namespace wkstab
