#pragma once

// Exact rational scalars and the small dense linear algebra built on them.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wkstab {

using Rational = mpq_class;
using RVec = std::vector<Rational>;
using RMatrix = std::vector<RVec>;

/// Parses "p/q", an integer, or a finite decimal such as "-0.125" / "3e-2".
/// Throws wkstab::Error("parse") on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact binary value of a finite double.
Rational from_double(double x);

std::vector<double> to_double(const RVec& v);

Rational dot(const RVec& a, const RVec& b);

/// Exact determinant by Gaussian elimination.
Rational determinant(RMatrix a);

int rank(RMatrix a);

/// Unique solution of a square system, or nullopt when singular.
std::optional<RVec> solve(RMatrix a, RVec b);

/// A nonzero vector spanning the kernel of an (n-1) x n matrix of rank n-1.
std::optional<RVec> kernel_vector(const RMatrix& rows, int n);

/// Affine dimension of a point set (-1 for the empty set).
int affine_dimension(const std::vector<RVec>& points);

Rational factorial(int k);

}  // namespace wkstab
