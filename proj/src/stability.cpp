#include "wkstab/stability.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "wkstab/error.hpp"
#include "wkstab/grid.hpp"

namespace wkstab {

namespace {

struct Region {
  std::vector<Simplex> simplices;
  Rational scale;  // L_j(x0), or t
};

struct Sample {
  double phi = 0;
  double grad_norm = 0;
};

StabilityReport scan(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                     const std::vector<Region>& regions, const RVec& x0, int depth, Exec exec) {
  const int n = p.dim();
  const std::vector<double> base = to_double(x0);
  StabilityReport report;
  report.grid_depth = depth;
  report.x0 = x0;
  report.margin = std::numeric_limits<double>::infinity();

  for (std::size_t r = 0; r < regions.size(); ++r) {
    const double inv = to_double(Rational(1 / regions[r].scale));
    const SampleGrid grid = barycentric_grid(regions[r].simplices, depth);
    report.mesh = std::max(report.mesh, grid.mesh);
    auto samples = kernels::map<Sample>(
        grid.points.size(),
        [&](std::size_t i) {
          const auto& x = grid.points[i];
          const Jet jv = v.jet(x);
          const Jet jw = w.jet(x);
          std::vector<double> dx(n);
          for (int k = 0; k < n; ++k) dx[k] = x[k] - base[k];
          double directional = 0;
          for (int k = 0; k < n; ++k) directional += jv.grad[k] * dx[k];
          Sample s;
          s.phi = inv * ((n + 1) * jv.value + directional) - 0.5 * jw.value;
          double norm2 = 0;
          for (int a = 0; a < n; ++a) {
            double hdx = 0;
            for (int k = 0; k < n; ++k) hdx += jv.hess[a * n + k] * dx[k];
            const double g = inv * ((n + 2) * jv.grad[a] + hdx) - 0.5 * jw.grad[a];
            norm2 += g * g;
          }
          s.grad_norm = std::sqrt(norm2);
          return s;
        },
        exec);
    double region_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      report.lipschitz = std::max(report.lipschitz, samples[i].grad_norm);
      if (samples[i].phi < region_min) region_min = samples[i].phi;
      if (samples[i].phi < report.margin) {
        report.margin = samples[i].phi;
        report.argmin = grid.points[i];
        report.cone_index = static_cast<int>(r);
      }
    }
    report.cone_minima.push_back(region_min);
  }
  report.certified_lower_bound = report.margin - report.lipschitz * report.mesh;
  report.certified = report.certified_lower_bound >= 0;
  report.verdict = (report.margin >= 0 && report.certified) ? StabilityReport::Verdict::holds
                                                            : StabilityReport::Verdict::inconclusive;
  return report;
}

RVec base_point(const LabeledPolytope& p, std::optional<RVec> x0) {
  RVec x = x0 ? std::move(*x0) : p.barycenter();
  if (!p.is_interior(x)) throw Error("NotInterior", "base point is not strictly interior");
  return x;
}

}  // namespace

StabilityReport sufficient_condition(const LabeledPolytope& p, const WeightExpr& v,
                                     const WeightExpr& w, std::optional<RVec> x0, int grid_depth,
                                     Exec exec) {
  const RVec base = base_point(p, std::move(x0));
  const ConeDecomposition cones = cone_decomposition(p, base);
  std::vector<Region> regions;
  for (const auto& cone : cones.cones) regions.push_back({cone.simplices, p.facets()[cone.facet](base)});
  return scan(p, v, w, regions, base, grid_depth, exec);
}

StabilityReport fano_condition(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                               std::optional<RVec> x0, const Rational& t, int grid_depth, Exec exec) {
  if (t <= 0) throw Error("input", "scale t must be positive");
  const RVec base = base_point(p, std::move(x0));
  StabilityReport r = scan(p, v, w, {Region{p.triangulate(), t}}, base, grid_depth, exec);
  r.cone_index = -1;
  return r;
}

PLConvexFunction normalize_f(const PLConvexFunction& f, const RVec& x0) {
  const Rational value = f(x0);
  // Among the pieces active at x0, take the lexicographically smallest gradient.
  const AffineFunctional* support = nullptr;
  for (const auto& l : f.pieces)
    if (l(x0) == value && (!support || l.u < support->u)) support = &l;
  PLConvexFunction out;
  for (const auto& l : f.pieces) out.pieces.push_back(l - *support);
  return out;
}

RatioResult stability_ratio(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                            const PLConvexFunction& f, std::optional<RVec> x0,
                            const QuadratureOptions& opts) {
  const RVec base = base_point(p, std::move(x0));
  RatioResult r;
  r.l1_norm = integrate_pl(p.polytope(), normalize_f(f, base), opts.exec);
  if (r.l1_norm == 0) throw Error("ZeroTestFunction", "normalised test function vanishes identically");
  r.futaki = futaki_pl(p, v, w, f, opts);
  if (r.futaki.exact) {
    r.exact_ratio = *r.futaki.exact_value / r.l1_norm;
    r.ratio = r.exact_ratio->get_d();
  } else {
    r.ratio = r.futaki.value / r.l1_norm.get_d();
  }
  return r;
}

std::vector<PLConvexFunction> simple_pl_family(const LabeledPolytope& p, int slope_bound, int offsets) {
  if (slope_bound < 1 || offsets < 1) throw Error("input", "slope bound and offsets must be >= 1");
  const int n = p.dim();
  std::vector<PLConvexFunction> family;
  std::vector<int> u(n, -slope_bound);
  while (true) {
    int g = 0;
    for (int k : u) g = std::gcd(g, std::abs(k));
    if (g == 1) {
      RVec ur(u.begin(), u.end());
      Rational lo = dot(ur, p.vertices().front()), hi = lo;
      for (const auto& vert : p.vertices()) {
        Rational s = dot(ur, vert);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      for (int k = 1; k <= offsets; ++k) {
        Rational t = lo + (hi - lo) * Rational(k) / (offsets + 1);
        family.push_back({{AffineFunctional::constant(n, 0), AffineFunctional(ur, -t)}});
      }
    }
    int i = n - 1;
    while (i >= 0 && u[i] == slope_bound) u[i--] = -slope_bound;
    if (i < 0) break;
    ++u[i];
  }
  return family;
}

DestabilizerReport destabilizer_search(const LabeledPolytope& p, const WeightExpr& v,
                                       const WeightExpr& w, std::optional<RVec> x0,
                                       const SearchOptions& opts) {
  const RVec base = base_point(p, std::move(x0));
  const auto family = simple_pl_family(p, opts.slope_bound, opts.offsets);
  QuadratureOptions inner = opts.quad;
  inner.exec = Exec::serial;

  struct Outcome {
    double ratio = 0;
    std::optional<Rational> exact;
  };
  auto outcomes = kernels::map<Outcome>(
      family.size(),
      [&](std::size_t i) {
        RatioResult r = stability_ratio(p, v, w, family[i], base, inner);
        return Outcome{r.ratio, r.exact_ratio};
      },
      opts.quad.exec);

  DestabilizerReport report;
  report.x0 = base;
  report.family_size = family.size();
  report.threshold = opts.threshold;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    report.ratios.push_back(o.ratio);
    if (!(o.ratio > opts.threshold)) {
      report.all_above_threshold = false;
      ++report.below_threshold;
    }
    bool better;
    if (!report.best_f) better = true;
    else if (o.exact && report.best_exact_ratio) better = *o.exact < *report.best_exact_ratio;
    else better = o.ratio < report.best_ratio;
    if (better) {
      report.best_f = family[i];
      report.best_ratio = o.ratio;
      report.best_exact_ratio = o.exact;
    }
  }
  return report;
}

}  // namespace wkstab
