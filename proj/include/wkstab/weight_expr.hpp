#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wkstab/affine.hpp"
#include "wkstab/multipoly.hpp"
#include "wkstab/rational.hpp"

namespace wkstab {

/// Value, gradient and row-major Hessian of a weight at a point.
struct Jet {
  double value = 0;
  std::vector<double> grad;
  std::vector<double> hess;
};

/// Immutable expression tree for weight functions on a polytope:
/// polynomials, positive-affine powers ℓ^m, exponentials of affine
/// functions, and sums / products / quotients of these.
///
/// Evaluation throws Error("DomainError") where an affine-power base is
/// nonpositive (nonnegative integer exponents excepted) or a quotient
/// denominator vanishes.
class WeightExpr {
 public:
  enum class Kind { poly, affpow, expaff, sum, product, quotient, scalar };

  WeightExpr() : WeightExpr(scalar(0)) {}

  static WeightExpr scalar(const Rational& value);
  static WeightExpr poly(MultiPoly p);
  static WeightExpr affine(const AffineFunctional& l) { return poly(MultiPoly::affine(l)); }
  static WeightExpr affpow(AffineFunctional base, Rational exponent);
  /// Non-rational exponent; the node is flagged inexact.
  static WeightExpr affpow_real(AffineFunctional base, double exponent);
  static WeightExpr expaff(AffineFunctional l);
  static WeightExpr sum(std::vector<WeightExpr> terms);
  static WeightExpr product(std::vector<WeightExpr> factors);
  static WeightExpr quotient(WeightExpr numerator, WeightExpr denominator);

  Kind kind() const;
  const MultiPoly& poly_data() const;
  const AffineFunctional& affine_data() const;
  const Rational& exponent() const;
  bool exponent_exact() const;
  double exponent_value() const;
  const Rational& scalar_value() const;
  const std::vector<WeightExpr>& args() const;

  /// True if any affine-power exponent in the tree is a non-rational real.
  bool has_inexact_exponent() const;
  /// Dimension implied by the tree, or nullopt for pure scalars.
  std::optional<int> dim() const;

  double operator()(std::span<const double> x) const;
  double operator()(const std::vector<double>& x) const { return (*this)(std::span<const double>(x)); }
  Jet jet(std::span<const double> x) const;

  /// Exact polynomial form when the tree is polynomial (scalars, polys,
  /// nonnegative integer affine powers, sums and products, constant
  /// denominators).
  std::optional<MultiPoly> to_poly(int n) const;
  bool is_polynomial(int n) const { return to_poly(n).has_value(); }

  /// Symbolic ∂/∂x_i as another expression of the same grammar.
  WeightExpr partial(int i, int n) const;
  /// ⟨∇e(x), x⟩ as an expression.
  WeightExpr euler(int n) const;

  bool is_scalar(const Rational& value) const;

  friend WeightExpr operator+(const WeightExpr& a, const WeightExpr& b) { return sum({a, b}); }
  friend WeightExpr operator-(const WeightExpr& a, const WeightExpr& b) {
    return sum({a, product({scalar(-1), b})});
  }
  friend WeightExpr operator*(const WeightExpr& a, const WeightExpr& b) { return product({a, b}); }
  friend WeightExpr operator/(const WeightExpr& a, const WeightExpr& b) { return quotient(a, b); }

  struct Node;

 private:
  explicit WeightExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  void jet_into(std::span<const double> x, Jet& out) const;

  std::shared_ptr<const Node> node_;
};

}  // namespace wkstab
