#include <doctest.h>

#include <cmath>
#include <random>

#include "shapes.hpp"
#include "wkstab/error.hpp"
#include "wkstab/grid.hpp"
#include "wkstab/stability.hpp"

using namespace wkstab;
using shapes::lab;
using shapes::q;

namespace {

using Verdict = StabilityReport::Verdict;
const WeightExpr kOne = WeightExpr::scalar(1);

WeightExpr c(long k) { return WeightExpr::scalar(k); }

PLConvexFunction crease(const AffineFunctional& l) { return {{AffineFunctional::constant(l.dim(), 0), l}}; }

}  // namespace

TEST_CASE("sufficient condition examples") {
  StabilityReport sq = sufficient_condition(shapes::square(), kOne, c(8), std::nullopt, 4);
  CHECK(sq.verdict == Verdict::holds);
  CHECK(sq.certified);
  CHECK(std::abs(sq.margin - 2) <= 1e-12);
  CHECK(sq.cone_minima.size() == 4);
  CHECK(sq.x0 == RVec{q(1, 2), q(1, 2)});

  StabilityReport tri = sufficient_condition(shapes::simplex(2), kOne, c(12), std::nullopt, 4);
  CHECK(tri.verdict == Verdict::holds);
  CHECK(std::abs(tri.margin - 3) <= 1e-12);

  StabilityReport big = sufficient_condition(shapes::square(), kOne, c(20), std::nullopt, 4);
  CHECK(big.verdict == Verdict::inconclusive);
  CHECK(std::abs(big.margin + 4) <= 1e-12);
  CHECK(big.cone_index >= 0);
  CHECK(big.argmin.size() == 2);

  CHECK_THROWS_AS(sufficient_condition(shapes::square(), kOne, c(8), RVec{0, 0}, 4), Error);
}

TEST_CASE("Fano variant") {
  StabilityReport tri = fano_condition(shapes::simplex(2), kOne, c(12), std::nullopt, q(1, 3), 4);
  CHECK(std::abs(tri.margin - 3) <= 1e-12);
  CHECK(tri.cone_index == -1);
  StabilityReport seg = fano_condition(shapes::interval(), kOne, c(4), std::nullopt, 1, 4);
  CHECK(seg.margin == 0);
  CHECK(seg.verdict == Verdict::holds);
  StabilityReport neg = fano_condition(shapes::interval(), kOne, c(4), std::nullopt, 2, 4);
  CHECK(neg.margin == -1);
  CHECK(neg.verdict == Verdict::inconclusive);
  CHECK_THROWS_AS(fano_condition(shapes::interval(), kOne, c(4), std::nullopt, 0, 4), Error);
}

TEST_CASE("margin is affine in a constant shift of w") {
  auto hex = shapes::hexagon();
  auto v = WeightExpr::affpow(lab({1, 1}, 1), Rational(2));
  auto w = WeightExpr::affine(lab({1, -1}, 3));
  const double base = sufficient_condition(hex, v, w, std::nullopt, 4).margin;
  for (long k : {-3, 1, 5}) {
    const double shifted = sufficient_condition(hex, v, w + c(k), std::nullopt, 4).margin;
    CHECK(shifted == doctest::Approx(base - k / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("hand evaluation of the condition at cone apexes") {
  // v = x1 + 2, w = 8 on the square, x0 = (1/2, 1/2): Φ_j at the vertex (1,1)
  // = ((n+1) v + ⟨∇v, x - x0⟩) / L_j(x0) - w/2 = (3·3 + 1/2) / (1/2) - 4 = 15.
  auto sq = shapes::square();
  auto v = WeightExpr::affine(lab({1, 0}, 2));
  StabilityReport r = sufficient_condition(sq, v, c(8), std::nullopt, 3);
  // Minimum: at x1 = 0, Φ = (3·2 - 1/2)/(1/2) - 4 = 7.
  CHECK(r.margin == doctest::Approx(7));
  CHECK(r.argmin[0] == 0);
}

TEST_CASE("normalize_f") {
  RVec half = {q(1, 2)};
  PLConvexFunction aff = PLConvexFunction::affine(lab({3}, 1));
  PLConvexFunction a = normalize_f(aff, half);
  CHECK(a(RVec{0}) == 0);
  CHECK(a(RVec{1}) == 0);

  PLConvexFunction f = crease(lab({1}, q(-1, 2)));
  PLConvexFunction g = normalize_f(f, half);
  for (Rational x : {Rational(0), q(1, 4), q(3, 4), Rational(1)}) CHECK(g(RVec{x}) == f(RVec{x}));

  PLConvexFunction abs_f{{lab({1}, q(-1, 2)), lab({-1}, q(1, 2))}};
  PLConvexFunction h = normalize_f(abs_f, RVec{q(1, 4)});
  for (Rational x : {Rational(0), q(1, 4), q(1, 2), q(3, 4), Rational(1)}) {
    Rational expected = std::max(Rational(2 * x - 1), Rational(0));
    CHECK(h(RVec{x}) == expected);
  }
}

TEST_CASE("normalized functions vanish at x0 and are nonnegative") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    auto p = shapes::random_delzant(rng, n);
    PLConvexFunction f;
    for (int k = 0; k < 3; ++k) {
      RVec u;
      for (int i = 0; i < n; ++i) u.push_back(Rational(shapes::pick(rng, -3, 3)));
      f.pieces.emplace_back(u, q(shapes::pick(rng, -4, 4), 2));
    }
    RVec x0 = p.barycenter();
    PLConvexFunction g = normalize_f(f, x0);
    CHECK(g(x0) == 0);
    for (const auto& v : p.vertices()) CHECK(g(v) >= 0);
    for (const auto& s : barycentric_grid(p, 2).points) CHECK(g(std::span<const double>(s)) >= -1e-12);
  }
}

TEST_CASE("stability ratio") {
  auto seg = shapes::interval();
  RatioResult r = stability_ratio(seg, kOne, c(4), crease(lab({1}, q(-1, 2))), std::nullopt);
  REQUIRE(r.exact_ratio);
  CHECK(*r.exact_ratio == 4);
  CHECK(r.l1_norm == q(1, 8));

  RatioResult m = stability_ratio(seg, kOne, c(4), crease(lab({-1}, q(1, 2))), std::nullopt);
  CHECK(*m.exact_ratio == 4);

  CHECK_THROWS_AS(stability_ratio(seg, kOne, c(4), PLConvexFunction::affine(lab({1}, 0)), std::nullopt), Error);
  try {
    stability_ratio(seg, kOne, c(4), PLConvexFunction::affine(lab({1}, 0)), std::nullopt);
  } catch (const Error& e) {
    CHECK(e.code() == "ZeroTestFunction");
  }

  // Scaling f scales numerator and denominator alike.
  auto sq = shapes::square();
  auto v = WeightExpr::affine(lab({1, 0}, 2));
  PLConvexFunction f = crease(lab({1, 1}, q(-2, 3)));
  PLConvexFunction g{{AffineFunctional::constant(2, 0), Rational(5) * lab({1, 1}, q(-2, 3))}};
  CHECK(*stability_ratio(sq, v, c(7), f, std::nullopt).exact_ratio ==
        *stability_ratio(sq, v, c(7), g, std::nullopt).exact_ratio);
}

TEST_CASE("ratio is invariant under adding affines once F vanishes on affines") {
  auto sq = shapes::square();
  auto w = c(8);
  for (auto ell : {AffineFunctional::constant(2, 1), AffineFunctional::coordinate(2, 0),
                   AffineFunctional::coordinate(2, 1)})
    REQUIRE(*futaki_affine(sq, kOne, w, ell).exact_value == 0);
  PLConvexFunction f = crease(lab({1, 2}, -1));
  PLConvexFunction g;
  for (const auto& l : f.pieces) g.pieces.push_back(l + lab({3, -1}, 2));
  CHECK(*stability_ratio(sq, kOne, w, f, std::nullopt).exact_ratio ==
        *stability_ratio(sq, kOne, w, g, std::nullopt).exact_ratio);
}

TEST_CASE("destabilizer search") {
  SearchOptions opts;
  opts.slope_bound = 1;
  opts.offsets = 3;
  DestabilizerReport seg = destabilizer_search(shapes::interval(), kOne, c(4), std::nullopt, opts);
  CHECK(seg.family_size == 6);
  REQUIRE(seg.best_exact_ratio);
  CHECK(*seg.best_exact_ratio == 4);
  CHECK(seg.all_above_threshold);
  REQUIRE(seg.best_f);
  CHECK((*seg.best_f)(RVec{q(1, 2)}) == 0);

  DestabilizerReport stable = destabilizer_search(shapes::square(), kOne, c(8), std::nullopt);
  CHECK(stable.all_above_threshold);
  CHECK(stable.best_ratio > 0);

  DestabilizerReport big = destabilizer_search(shapes::square(), kOne, c(100), std::nullopt);
  CHECK_FALSE(big.all_above_threshold);
  CHECK(big.best_ratio < 0);
  RatioResult direct = stability_ratio(shapes::square(), kOne, c(100), crease(lab({1, 0}, q(-1, 2))), std::nullopt);
  CHECK(direct.futaki.value < 0);
}

TEST_CASE("serial and parallel stability paths agree") {
  auto hex = shapes::hexagon();
  auto v = WeightExpr::expaff(lab({1, -1}, 0));
  auto w = WeightExpr::affine(lab({1, 1}, 5));
  StabilityReport a = sufficient_condition(hex, v, w, std::nullopt, 5, Exec::serial);
  StabilityReport b = sufficient_condition(hex, v, w, std::nullopt, 5, Exec::parallel);
  CHECK(a.margin == b.margin);
  CHECK(a.argmin == b.argmin);
  CHECK(a.lipschitz == b.lipschitz);
  CHECK(a.cone_minima == b.cone_minima);

  SearchOptions so, po;
  so.slope_bound = po.slope_bound = 2;
  so.offsets = po.offsets = 4;
  so.quad.exec = Exec::serial;
  po.quad.exec = Exec::parallel;
  DestabilizerReport ds = destabilizer_search(hex, v, w, std::nullopt, so);
  DestabilizerReport dp = destabilizer_search(hex, v, w, std::nullopt, po);
  CHECK(ds.ratios == dp.ratios);
  CHECK(ds.best_ratio == dp.best_ratio);
}
