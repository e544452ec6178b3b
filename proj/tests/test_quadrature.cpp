#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "shapes.hpp"
#include "wkstab/quadrature.hpp"

using namespace wkstab;
using shapes::lab;
using shapes::q;

namespace {

MultiPoly X(int n, int i) { return MultiPoly::variable(n, i); }

}  // namespace

TEST_CASE("exact polynomial integrals") {
  auto tri = shapes::simplex(2);
  auto sq = shapes::square();
  CHECK(integrate_poly(tri, MultiPoly::constant(2, 1)) == q(1, 2));
  CHECK(integrate_poly(tri, X(2, 0)) == q(1, 6));
  CHECK(integrate_poly(sq, X(2, 0) * X(2, 1)) == q(1, 4));
  CHECK(integrate_poly(shapes::hexagon(), MultiPoly::constant(2, 1)) == 3);
  CHECK(integrate_poly(shapes::cube(), X(3, 0) * X(3, 1) * X(3, 2)) == q(1, 8));
  // ∫ over the standard 3-simplex of x1² = 2!/5! = 1/60
  CHECK(integrate_poly(shapes::simplex(3), X(3, 0).pow(2)) == q(1, 60));
}

TEST_CASE("exact boundary integrals") {
  auto tri = shapes::simplex(2);
  auto sq = shapes::square();
  CHECK(integrate_poly_boundary(tri, MultiPoly::constant(2, 1)) == 3);
  CHECK(integrate_poly_boundary(sq, MultiPoly::constant(2, 1)) == 4);
  CHECK(integrate_poly_boundary(tri, X(2, 0)) == 1);
  CHECK(integrate_poly_boundary(sq, X(2, 0)) == 2);
  CHECK(integrate_poly_boundary(shapes::interval(), X(1, 0) + MultiPoly::constant(1, 2)) == 5);
  CHECK(integrate_poly_boundary(shapes::cube(), MultiPoly::constant(3, 1)) == 6);
}

TEST_CASE("weight integrals") {
  auto tri = shapes::simplex(2);
  auto sq = shapes::square();
  IntegralResult one = integrate_weight(tri, WeightExpr::scalar(1));
  CHECK(one.exact);
  CHECK(*one.exact_value == q(1, 2));
  CHECK(one.error_bound == 0);

  QuadratureOptions opts;
  opts.tol = 1e-8;
  IntegralResult inv = integrate_weight(sq, WeightExpr::affpow(lab({1, 0}, 2), Rational(-1)), opts);
  CHECK_FALSE(inv.exact);
  CHECK(inv.error_bound <= 1e-8);
  CHECK(std::abs(inv.value - std::log(1.5)) <= 1e-8);

  IntegralResult ex = integrate_weight(sq, WeightExpr::expaff(lab({1, 0}, 0)));
  CHECK(std::abs(ex.value - (std::exp(1.0) - 1)) <= 1e-10);

  IntegralResult b1 = integrate_weight_boundary(tri, WeightExpr::scalar(1));
  CHECK(*b1.exact_value == 3);
  IntegralResult b2 = integrate_weight_boundary(sq, WeightExpr::affine(lab({1, 0}, 0)));
  CHECK(*b2.exact_value == 2);
  IntegralResult b3 = integrate_weight_boundary(shapes::interval(), WeightExpr::affpow(lab({1}, 2), Rational(-1)));
  CHECK(b3.value == doctest::Approx(5.0 / 6).epsilon(1e-14));

  // Boundary integral of a non-polynomial weight against the closed form:
  // ∫_{∂[0,1]²} e^{x1} dσ = 2(e-1) + 1 + e.
  IntegralResult b4 = integrate_weight_boundary(sq, WeightExpr::expaff(lab({1, 0}, 0)));
  CHECK(std::abs(b4.value - (2 * (std::exp(1.0) - 1) + 1 + std::exp(1.0))) <= 1e-10);
}

TEST_CASE("Grundmann-Moller rule") {
  for (int k = 1; k <= 3; ++k) {
    const SimplexRule& r = grundmann_moller(k);
    CHECK(r.degree == 7);
    double sum = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& p : r.points) {
      CHECK(p.size() == static_cast<std::size_t>(k + 1));
      CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    // Exact on barycentric monomials of degree <= 7 (average over the simplex).
    std::mt19937_64 rng(k);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<int> beta(k + 1, 0);
      int budget = static_cast<int>(shapes::pick(rng, 0, 7));
      for (int b = 0; b < budget; ++b) ++beta[shapes::pick(rng, 0, k)];
      double rule = 0;
      for (std::size_t i = 0; i < r.points.size(); ++i) {
        double m = 1;
        for (int j = 0; j <= k; ++j) m *= std::pow(r.points[i][j], beta[j]);
        rule += r.weights[i] * m;
      }
      // average of λ^β over the k-simplex = k! ∏β! / (k+|β|)!
      Rational exact = factorial(k);
      int total = 0;
      for (int b : beta) {
        exact *= factorial(b);
        total += b;
      }
      exact /= factorial(k + total);
      CHECK(rule == doctest::Approx(exact.get_d()).epsilon(1e-13));
    }
  }
}

TEST_CASE("adaptive quadrature matches exact integration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 1 + trial % 3;
    auto p = shapes::random_delzant(rng, n);
    MultiPoly poly = shapes::random_poly(rng, n, 6);
    const double exact = integrate_poly(p, poly).get_d();
    IntegralResult r = adaptive_integrate(measured(p.triangulate()), WeightExpr::poly(poly));
    CHECK(std::abs(r.value - exact) <= 1e-9);
  }
}

TEST_CASE("quadrature budget is enforced") {
  QuadratureOptions opts;
  opts.tol = 1e-14;
  opts.budget = 4;
  auto sq = shapes::square();
  auto peaked = WeightExpr::affpow(lab({1, 1}, q(1, 100)), Rational(-3));
  try {
    integrate_weight(sq, peaked, opts);
    FAIL("expected ToleranceNotReached");
  } catch (const ToleranceNotReached& e) {
    CHECK(e.code() == "ToleranceNotReached");
    CHECK(e.partial().error_bound > 0);
    CHECK(std::isfinite(e.partial().value));
  }
}

TEST_CASE("clip additivity and linearity of exact integration") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    auto p = shapes::random_delzant(rng, n);
    MultiPoly a = shapes::random_poly(rng, n, 4), b = shapes::random_poly(rng, n, 4);
    RVec u;
    for (int i = 0; i < n; ++i) u.push_back(Rational(shapes::pick(rng, -2, 2)));
    if (std::all_of(u.begin(), u.end(), [](const Rational& x) { return x == 0; })) u[0] = 1;  // h = 0 keeps P on both sides
    AffineFunctional h(u, q(shapes::pick(rng, -4, 4), 3));
    ClipResult c = clip(p, h);
    Rational parts = 0;
    if (c.positive) parts += integrate_poly(*c.positive, a);
    if (c.negative) parts += integrate_poly(*c.negative, a);
    CHECK(parts == integrate_poly(p, a));
    Rational s = q(shapes::pick(rng, -5, 5), 7);
    CHECK(integrate_poly(p, a + s * b) == integrate_poly(p, a) + s * integrate_poly(p, b));
  }
}

TEST_CASE("Monte Carlo oracle") {
  auto tri = shapes::simplex(2);
  MonteCarloResult c = monte_carlo(tri, WeightExpr::scalar(1), 1000, 3);
  CHECK(c.mean == 0.5);
  CHECK(c.stderr_ == 0);

  MonteCarloResult x = monte_carlo(tri, WeightExpr::affine(lab({1, 0}, 0)), 1000000, 0);
  CHECK(x.samples == 1000000);
  CHECK(std::abs(x.mean - 1.0 / 6) <= 4 * x.stderr_);

  MonteCarloResult e = monte_carlo(shapes::square(), WeightExpr::expaff(lab({1, 0}, 0)), 1000000, 1);
  CHECK(std::abs(e.mean - (std::exp(1.0) - 1)) <= 4 * e.stderr_);
}

TEST_CASE("serial and parallel quadrature agree bit for bit") {
  auto hex = shapes::hexagon();
  auto e = WeightExpr::product({WeightExpr::expaff(lab({1, -1}, 0)), WeightExpr::affpow(lab({1, 1}, 1), q(-1, 2))});
  QuadratureOptions s, p;
  s.exec = Exec::serial;
  p.exec = Exec::parallel;
  IntegralResult a = integrate_weight(hex, e, s), b = integrate_weight(hex, e, p);
  CHECK(a.value == b.value);
  CHECK(a.error_bound == b.error_bound);
  MonteCarloResult ma = monte_carlo(hex, e, 100000, 5, Exec::serial);
  MonteCarloResult mb = monte_carlo(hex, e, 100000, 5, Exec::parallel);
  CHECK(ma.mean == mb.mean);
  CHECK(ma.stderr_ == mb.stderr_);
  MultiPoly poly = X(2, 0).pow(3) * X(2, 1) + MultiPoly::constant(2, 2);
  CHECK(integrate_poly(hex, poly, Exec::serial) == integrate_poly(hex, poly, Exec::parallel));
}
