// Serial vs parallel timings for the hot kernels. Arg 0 is the serial
// reference, arg 1 the OpenMP path.

#include <benchmark/benchmark.h>

#include <cmath>

#include "wkstab/kernels.hpp"
#include "wkstab/polytope.hpp"
#include "wkstab/quadrature.hpp"
#include "wkstab/stability.hpp"
#include "wkstab/weights.hpp"

using namespace wkstab;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

LabeledPolytope hexagon() {
  auto l = [](long a, long b, long c) { return AffineFunctional({Rational(a), Rational(b)}, Rational(c)); };
  return LabeledPolytope::from_facets(2, {l(1, 0, 0), l(0, 1, 0), l(-1, 0, 2), l(0, -1, 2), l(1, 1, -1), l(-1, -1, 3)});
}

LabeledPolytope cube() {
  std::vector<AffineFunctional> f;
  for (int i = 0; i < 3; ++i) {
    RVec u(3, Rational(0));
    u[i] = 1;
    f.emplace_back(u, 0);
    u[i] = -1;
    f.emplace_back(u, 1);
  }
  return LabeledPolytope::from_facets(3, f);
}

WeightExpr nonpoly_weight() {
  return WeightExpr::product({WeightExpr::expaff(AffineFunctional({1, -1}, 0)),
                              WeightExpr::affpow(AffineFunctional({1, 1}, 1), Rational(-1) / 2)});
}

void BM_ScanMin(benchmark::State& state) {
  const Exec e = exec_of(state);
  auto f = [](std::size_t i) { return std::cos(1e-3 * static_cast<double>(i)) * std::exp(-1e-7 * i); };
  for (auto _ : state) benchmark::DoNotOptimize(kernels::scan_min(1 << 20, f, e));
}

void BM_AdaptiveQuadrature(benchmark::State& state) {
  auto p = hexagon();
  auto w = nonpoly_weight();
  QuadratureOptions opts;
  opts.tol = 1e-12;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_weight(p, w, opts).value);
}

void BM_MonteCarlo(benchmark::State& state) {
  auto p = cube();
  auto w = WeightExpr::expaff(AffineFunctional({1, 2, -1}, 0));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(p, w, 1000000, 1, exec_of(state)).mean);
}

void BM_SufficientCondition(benchmark::State& state) {
  auto p = hexagon();
  auto v = WeightExpr::expaff(AffineFunctional({1, -1}, 0));
  auto w = WeightExpr::affine(AffineFunctional({1, 1}, 5));
  for (auto _ : state)
    benchmark::DoNotOptimize(sufficient_condition(p, v, w, std::nullopt, 7, exec_of(state)).margin);
}

void BM_DestabilizerSearch(benchmark::State& state) {
  auto p = hexagon();
  auto v = WeightExpr::expaff(AffineFunctional({1, -1}, 0));
  auto w = WeightExpr::affine(AffineFunctional({1, 1}, 5));
  SearchOptions opts;
  opts.slope_bound = 2;
  opts.offsets = 6;
  opts.quad.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(destabilizer_search(p, v, w, std::nullopt, opts).best_ratio);
}

}  // namespace

BENCHMARK(BM_ScanMin)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdaptiveQuadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SufficientCondition)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DestabilizerSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
