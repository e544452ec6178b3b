#include <doctest.h>

#include <cmath>

#include "shapes.hpp"
#include "wkstab/error.hpp"
#include "wkstab/fibration.hpp"
#include "wkstab/grid.hpp"

using namespace wkstab;
using shapes::lab;
using shapes::q;

namespace {

BaseFactor factor(RVec p, Rational c, int m, Rational scal) { return {std::move(p), std::move(c), m, std::move(scal)}; }

const WeightExpr kOne = WeightExpr::scalar(1);
const WeightExpr kEight = WeightExpr::scalar(8);

}  // namespace

TEST_CASE("factor positivity") {
  auto sq = shapes::square();
  auto ok = check_positivity(sq, {{factor({1, 0}, 2, 1, 0)}});
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].min == 2);
  CHECK(ok[0].argmin[0] == 0);
  CHECK(ok[0].ok);

  auto bad = check_positivity(sq, {{factor({-1, 0}, q(1, 2), 1, 0)}});
  CHECK(bad[0].min == q(-1, 2));
  CHECK(bad[0].argmin[0] == 1);
  CHECK_FALSE(bad[0].ok);

  auto flat = check_positivity(sq, {{factor({0, 0}, 1, 1, 0)}});
  CHECK(flat[0].min == 1);

  CHECK_THROWS_AS(check_positivity(sq, {{factor({q(1, 2), 0}, 1, 1, 0)}}), Error);
  CHECK_THROWS_AS(check_positivity(sq, {{factor({1, 0}, 1, 0, 0)}}), Error);
}

TEST_CASE("fibration weights") {
  auto sq = shapes::square();
  SampleGrid g = barycentric_grid(sq, 4);

  WeightPair same = fibration_weights(sq, {}, kOne, kEight);
  CHECK(same.v.is_scalar(1));
  CHECK(same.w.is_scalar(8));

  WeightPair one = fibration_weights(sq, {{factor({1, 0}, 2, 1, 0)}}, kOne, kEight);
  CHECK(one.w.is_scalar(8));
  for (const auto& x : g.points) CHECK(one.v(x) == doctest::Approx(x[0] + 2).epsilon(1e-15));
  CHECK(one.v_positive->kind == PositivityStatus::Kind::certified);
  CHECK(one.v_log_concave->kind == LogConcavityStatus::Kind::certified);

  WeightPair curved = fibration_weights(sq, {{factor({1, 0}, 2, 1, 4)}}, kOne, kEight);
  CHECK(curved.w(std::vector<double>{0, 0}) == 6);
  CHECK(curved.w(std::vector<double>{1, 0}) == doctest::Approx(8 - 4.0 / 3).epsilon(1e-15));

  try {
    fibration_weights(sq, {{factor({1, 0}, 2, 1, 0), factor({-1, 0}, q(1, 2), 1, 0)}}, kOne, kEight);
    FAIL("expected NotPositive");
  } catch (const Error& e) {
    CHECK(e.code() == "NotPositive");
    CHECK(e.location() == "factors[1]");
  }
}

TEST_CASE("fibration invariants") {
  auto hex = shapes::hexagon();
  SampleGrid g = barycentric_grid(hex, 4);
  auto w = WeightExpr::affine(lab({1, -1}, 5));
  auto v = WeightExpr::expaff(lab({1, 2}, 0));
  FibrationData flat{{factor({1, 0}, 1, 2, 0), factor({0, 1}, 3, 1, 0)}};

  // scal = 0 leaves w unchanged.
  WeightPair t = fibration_weights(hex, flat, v, w);
  for (const auto& x : g.points) CHECK(std::abs(t.w(x) - w(x)) <= 1e-12);
  CHECK(t.v_positive->positive());

  // Adding a factor with positive scal strictly lowers w̃.
  FibrationData more = flat;
  more.factors.push_back(factor({1, 1}, 1, 1, q(1, 3)));
  WeightPair u = fibration_weights(hex, more, v, w);
  for (const auto& x : g.points) CHECK(u.w(x) < t.w(x));

  // Multiplicative in v.
  Rational c = q(5, 2);
  WeightPair scaled = fibration_weights(hex, flat, WeightExpr::scalar(c) * v, w);
  for (const auto& x : g.points) CHECK(scaled.v(x) == doctest::Approx(c.get_d() * t.v(x)).epsilon(1e-14));

  // Log-concavity survives, structurally and numerically.
  CHECK(t.v_log_concave->kind == LogConcavityStatus::Kind::certified);
  CHECK(sampled_log_concavity(t.v, hex, 4).concave());
}

TEST_CASE("fibered stability") {
  auto sq = shapes::square();
  SearchOptions opts;
  opts.slope_bound = 2;
  opts.offsets = 4;

  FiberedStability trivial = fibered_stability(sq, {}, kOne, kEight, std::nullopt, 4, opts);
  StabilityReport direct = sufficient_condition(sq, kOne, kEight, std::nullopt, 4);
  CHECK(trivial.stability.margin == direct.margin);
  CHECK(trivial.stability.verdict == direct.verdict);
  CHECK(trivial.search.ratios == destabilizer_search(sq, kOne, kEight, std::nullopt, opts).ratios);

  // v' = x1 + 2, w' = 8 - 4/(x1 + 2). At x0 = (1/2,1/2), L_j(x0) = 1/2:
  // Φ = 2(3(x1+2) + x1 - 1/2) - 4 + 2/(x1+2) = 8x1 + 7 + 2/(x1+2), smallest at x1 = 0 where it is 8.
  FiberedStability one = fibered_stability(sq, {{factor({1, 0}, 2, 1, 4)}}, kOne, kEight, std::nullopt, 4, opts);
  CHECK(one.stability.margin == doctest::Approx(8).epsilon(1e-12));
  CHECK(one.stability.verdict == StabilityReport::Verdict::holds);
  CHECK(one.transformed.w(std::vector<double>{0, 0}) == 6);
}
