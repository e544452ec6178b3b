#pragma once

#include <span>
#include <string>

#include "wkstab/rational.hpp"

namespace wkstab {

/// x -> <u, x> + c with exact rational data. Used for facet labels L_j,
/// affine test functions, and the positive affine bases of weights.
struct AffineFunctional {
  RVec u;
  Rational c;

  AffineFunctional() = default;
  AffineFunctional(RVec linear, Rational offset) : u(std::move(linear)), c(std::move(offset)) {}

  static AffineFunctional constant(int n, const Rational& value);
  /// x_i, zero-based.
  static AffineFunctional coordinate(int n, int i);

  int dim() const { return static_cast<int>(u.size()); }

  Rational operator()(const RVec& x) const { return dot(u, x) + c; }
  double operator()(std::span<const double> x) const;

  bool is_constant() const;
  /// Integer linear part whose entries have gcd 1.
  bool is_primitive_integer() const;

  AffineFunctional operator-() const;
  friend AffineFunctional operator+(const AffineFunctional& a, const AffineFunctional& b);
  friend AffineFunctional operator-(const AffineFunctional& a, const AffineFunctional& b);
  friend AffineFunctional operator*(const Rational& s, const AffineFunctional& a);
  friend bool operator==(const AffineFunctional& a, const AffineFunctional& b) {
    return a.u == b.u && a.c == b.c;
  }

  std::string str() const;
};

}  // namespace wkstab
