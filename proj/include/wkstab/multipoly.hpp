#pragma once

#include <map>
#include <span>
#include <vector>

#include "wkstab/affine.hpp"
#include "wkstab/rational.hpp"

namespace wkstab {

using Exponent = std::vector<int>;

/// Sparse multivariate polynomial in n variables with exact rational
/// coefficients. Zero coefficients are never stored.
class MultiPoly {
 public:
  explicit MultiPoly(int n = 0) : n_(n) {}

  static MultiPoly constant(int n, const Rational& c);
  static MultiPoly variable(int n, int i);
  static MultiPoly affine(const AffineFunctional& l);
  static MultiPoly monomial(const Exponent& e, const Rational& c = 1);

  int dim() const { return n_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  /// Largest exponent of any single variable.
  int max_partial_degree() const;

  void add_term(const Exponent& e, const Rational& c);

  Rational operator()(const RVec& x) const;
  double operator()(std::span<const double> x) const;

  MultiPoly partial(int i) const;
  MultiPoly pow(int k) const;

  /// q(s_1(y), ..., s_n(y)): substitutes one polynomial per variable.
  MultiPoly compose(const std::vector<MultiPoly>& substitution) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& s);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const Rational& s, MultiPoly a) { return a *= s; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  int n_;
  std::map<Exponent, Rational> terms_;
};

/// Floating-point copy of a polynomial's terms for fast repeated evaluation.
class DoublePoly {
 public:
  DoublePoly() = default;
  explicit DoublePoly(const MultiPoly& p);

  double value(std::span<const double> x) const;
  /// Value, gradient, and Hessian (row-major n x n) at x.
  void jet(std::span<const double> x, double& value, std::span<double> grad,
           std::span<double> hess) const;

 private:
  int n_ = 0;
  int max_exp_ = 0;
  std::vector<int> exps_;  // term-major, n_ per term
  std::vector<double> coefs_;
};

}  // namespace wkstab
