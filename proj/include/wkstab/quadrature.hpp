#pragma once

// Exact integration of polynomials over polytopes and their boundaries,
// adaptive simplex quadrature for general weights, and a Monte Carlo oracle.

#include <cstdint>
#include <optional>
#include <vector>

#include "wkstab/error.hpp"
#include "wkstab/kernels.hpp"
#include "wkstab/multipoly.hpp"
#include "wkstab/polytope.hpp"
#include "wkstab/weight_expr.hpp"

namespace wkstab {

struct IntegralResult {
  double value = 0;
  bool exact = false;
  double error_bound = 0;
  std::optional<Rational> exact_value;

  static IntegralResult from_exact(Rational q) {
    IntegralResult r;
    r.value = q.get_d();
    r.exact = true;
    r.exact_value = std::move(q);
    return r;
  }
};

struct QuadratureOptions {
  double tol = 1e-10;
  std::size_t budget = 100000;  // simplices per integral
  Exec exec = Exec::parallel;
};

/// Thrown when the subdivision budget runs out; carries the partial result
/// and the error bound actually achieved.
class ToleranceNotReached : public Error {
 public:
  explicit ToleranceNotReached(IntegralResult partial)
      : Error("ToleranceNotReached", "quadrature budget exhausted before reaching tolerance"),
        partial_(partial) {}
  const IntegralResult& partial() const noexcept { return partial_; }

 private:
  IntegralResult partial_;
};

/// Symmetric Grundmann–Möller rule on the k-simplex, exact for total degree
/// 2s+1. Points are barycentric (k+1 coordinates); weights sum to 1.
struct SimplexRule {
  int dim = 0;
  int degree = 0;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

const SimplexRule& grundmann_moller(int k, int s = 3);

/// ∫ q over a measured simplex: pull back to barycentric coordinates and use
/// ∫_Δ λ^β = ∏ β_i! / (k + |β|)!.
Rational simplex_integral(const MeasuredSimplex& s, const MultiPoly& q);

Rational integrate_poly(const std::vector<MeasuredSimplex>& simplices, const MultiPoly& q,
                        Exec exec = Exec::parallel);
Rational integrate_poly(const Polytope& p, const MultiPoly& q, Exec exec = Exec::parallel);
Rational integrate_poly(const LabeledPolytope& p, const MultiPoly& q, Exec exec = Exec::parallel);

/// ∫_{F_j} q dσ through the chart of facet j.
Rational integrate_poly_facet(const LabeledPolytope& p, int j, const MultiPoly& q);
/// Σ_j ∫_{F_j} q dσ through the facet charts.
Rational integrate_poly_boundary(const LabeledPolytope& p, const MultiPoly& q);

/// Adaptive quadrature regardless of whether e is polynomial. Each simplex
/// gets tolerance tol * measure / total and is bisected along its longest
/// edge until |Q(S) - Q(children)| meets it.
IntegralResult adaptive_integrate(const std::vector<MeasuredSimplex>& simplices, const WeightExpr& e,
                                  const QuadratureOptions& opts = {});

/// Exact when e is polynomial, adaptive otherwise.
IntegralResult integrate_on(const std::vector<MeasuredSimplex>& simplices, const WeightExpr& e,
                            int n, const QuadratureOptions& opts = {});

IntegralResult integrate_weight(const LabeledPolytope& p, const WeightExpr& e,
                                const QuadratureOptions& opts = {});
IntegralResult integrate_weight_boundary(const LabeledPolytope& p, const WeightExpr& e,
                                         const QuadratureOptions& opts = {});

struct MonteCarloResult {
  double mean = 0;
  double stderr_ = 0;
  std::size_t samples = 0;
};

/// Volume-weighted simplex-mixture sampling with a fixed seed. Samples are
/// drawn in fixed-size chunks, each with its own seeded engine, so the
/// serial and parallel paths agree bit for bit.
MonteCarloResult monte_carlo(const Polytope& p, const WeightExpr& e, std::size_t samples,
                             std::uint64_t seed, Exec exec = Exec::parallel);
inline MonteCarloResult monte_carlo(const LabeledPolytope& p, const WeightExpr& e,
                                    std::size_t samples, std::uint64_t seed,
                                    Exec exec = Exec::parallel) {
  return monte_carlo(p.polytope(), e, samples, seed, exec);
}

}  // namespace wkstab
