#include "wkstab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>

namespace wkstab {

namespace {

template <class F>
void compositions(int parts, int m, std::vector<int>& a, int pos, F&& f) {
  if (pos == parts - 1) {
    a[pos] = m;
    f(a);
    return;
  }
  for (int v = m; v >= 0; --v) {
    a[pos] = v;
    compositions(parts, m - v, a, pos + 1, f);
  }
}

SimplexRule build_gm(int k, int s) {
  SimplexRule rule;
  rule.dim = k;
  rule.degree = 2 * s + 1;
  const int d = 2 * s + 1;
  const Rational kfact = factorial(k);
  std::vector<int> beta(k + 1);
  for (int i = 0; i <= s; ++i) {
    const int denom = d + k - 2 * i;
    // (-1)^i 2^(-2s) denom^d / (i! (d + k - i)!), scaled by k! so the weights sum to 1.
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(denom), static_cast<unsigned long>(d));
    Rational w = Rational(p) * kfact / (factorial(i) * factorial(d + k - i));
    w /= Rational(mpz_class(1) << (2 * s));
    if (i % 2) w = -w;
    const double wd = w.get_d();
    compositions(k + 1, s - i, beta, 0, [&](const std::vector<int>& b) {
      std::vector<double> lambda(k + 1);
      for (int j = 0; j <= k; ++j) lambda[j] = static_cast<double>(2 * b[j] + 1) / denom;
      rule.points.push_back(std::move(lambda));
      rule.weights.push_back(wd);
    });
  }
  return rule;
}

const Rational& small_factorial(int k) {
  static const std::vector<Rational> table = [] {
    std::vector<Rational> t(96);
    t[0] = 1;
    for (int i = 1; i < 96; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table.at(k);
}

struct WorkSimplex {
  std::vector<std::vector<double>> points;
  double measure;
};

double apply_rule(const WorkSimplex& s, const WeightExpr& e, const SimplexRule& rule) {
  const std::size_t n = s.points.front().size();
  std::vector<double> x(n);
  double acc = 0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      const double l = rule.points[q][j];
      for (std::size_t m = 0; m < n; ++m) x[m] += l * s.points[j][m];
    }
    acc += rule.weights[q] * e(x);
  }
  return acc * s.measure;
}

std::pair<WorkSimplex, WorkSimplex> bisect(const WorkSimplex& s) {
  const std::size_t k = s.points.size();
  const std::size_t n = s.points.front().size();
  std::size_t bi = 0, bj = 1;
  double best = -1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      double len2 = 0;
      for (std::size_t m = 0; m < n; ++m) {
        double d = s.points[i][m] - s.points[j][m];
        len2 += d * d;
      }
      if (len2 > best) {
        best = len2;
        bi = i;
        bj = j;
      }
    }
  std::vector<double> mid(n);
  for (std::size_t m = 0; m < n; ++m) mid[m] = 0.5 * (s.points[bi][m] + s.points[bj][m]);
  WorkSimplex a{s.points, 0.5 * s.measure}, b{s.points, 0.5 * s.measure};
  a.points[bj] = mid;
  b.points[bi] = mid;
  return {std::move(a), std::move(b)};
}

struct Evaluated {
  double parent = 0;
  double children = 0;
  double estimate = 0;
};

}  // namespace

const SimplexRule& grundmann_moller(int k, int s) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, SimplexRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({k, s});
  if (it == cache.end()) it = cache.emplace(std::make_pair(k, s), build_gm(k, s)).first;
  return it->second;
}

Rational simplex_integral(const MeasuredSimplex& s, const MultiPoly& q) {
  const int k = static_cast<int>(s.points.size()) - 1;
  const int n = q.dim();
  const int vars = k + 1;
  std::vector<MultiPoly> sub;
  sub.reserve(n);
  for (int m = 0; m < n; ++m) {
    MultiPoly xm(vars);
    for (int i = 0; i < vars; ++i) {
      Exponent e(vars, 0);
      e[i] = 1;
      xm.add_term(e, s.points[i][m]);
    }
    sub.push_back(std::move(xm));
  }
  MultiPoly pulled = q.compose(sub);
  Rational acc = 0;
  for (const auto& [beta, c] : pulled.terms()) {
    Rational t = c;
    int total = 0;
    for (int b : beta) {
      t *= small_factorial(b);
      total += b;
    }
    acc += t / small_factorial(k + total);
  }
  return acc * small_factorial(k) * s.measure;
}

Rational integrate_poly(const std::vector<MeasuredSimplex>& simplices, const MultiPoly& q, Exec exec) {
  if (q.is_zero()) return 0;
  auto parts = kernels::map<Rational>(
      simplices.size(), [&](std::size_t i) { return simplex_integral(simplices[i], q); }, exec);
  Rational acc = 0;
  for (const auto& p : parts) acc += p;
  return acc;
}

Rational integrate_poly(const Polytope& p, const MultiPoly& q, Exec exec) {
  return integrate_poly(measured(p.triangulate()), q, exec);
}

Rational integrate_poly(const LabeledPolytope& p, const MultiPoly& q, Exec exec) {
  return integrate_poly(p.polytope(), q, exec);
}

Rational integrate_poly_facet(const LabeledPolytope& p, int j, const MultiPoly& q) {
  FacetChart chart = facet_chart(p, j);
  if (!chart.domain) return chart.scale * q(chart.origin);
  return chart.scale * integrate_poly(*chart.domain, chart.pull_back(q), Exec::serial);
}

Rational integrate_poly_boundary(const LabeledPolytope& p, const MultiPoly& q) {
  Rational acc = 0;
  for (int j = 0; j < static_cast<int>(p.facets().size()); ++j) acc += integrate_poly_facet(p, j, q);
  return acc;
}

IntegralResult adaptive_integrate(const std::vector<MeasuredSimplex>& simplices, const WeightExpr& e,
                                  const QuadratureOptions& opts) {
  std::vector<WorkSimplex> active;
  double total_measure = 0;
  for (const auto& s : simplices) {
    WorkSimplex w;
    for (const auto& p : s.points) w.points.push_back(to_double(p));
    w.measure = s.measure.get_d();
    total_measure += w.measure;
    active.push_back(std::move(w));
  }
  IntegralResult result;
  if (active.empty() || total_measure == 0) return result;

  std::vector<double> accepted;
  std::vector<double> errors;
  std::size_t used = active.size();
  while (!active.empty()) {
    auto eval = kernels::map<Evaluated>(
        active.size(),
        [&](std::size_t i) {
          const WorkSimplex& s = active[i];
          const SimplexRule& rule = grundmann_moller(static_cast<int>(s.points.size()) - 1);
          Evaluated r;
          r.parent = apply_rule(s, e, rule);
          if (s.points.size() == 1) {
            r.children = r.parent;
            return r;
          }
          auto [a, b] = bisect(s);
          r.children = apply_rule(a, e, rule) + apply_rule(b, e, rule);
          r.estimate = std::abs(r.parent - r.children);
          return r;
        },
        opts.exec);

    std::vector<WorkSimplex> next;
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const double local_tol = opts.tol * active[i].measure / total_measure;
      if (eval[i].estimate <= local_tol) {
        accepted.push_back(eval[i].children);
        errors.push_back(eval[i].estimate);
      } else {
        pending.push_back(i);
      }
    }
    if (used + 2 * pending.size() > opts.budget) {
      for (std::size_t i : pending) {
        accepted.push_back(eval[i].children);
        errors.push_back(eval[i].estimate);
      }
      result.value = kernels::compensated_sum(accepted);
      result.error_bound = kernels::compensated_sum(errors);
      throw ToleranceNotReached(result);
    }
    for (std::size_t i : pending) {
      auto [a, b] = bisect(active[i]);
      next.push_back(std::move(a));
      next.push_back(std::move(b));
    }
    used += 2 * pending.size();
    active = std::move(next);
  }
  result.value = kernels::compensated_sum(accepted);
  result.error_bound = kernels::compensated_sum(errors);
  return result;
}

IntegralResult integrate_on(const std::vector<MeasuredSimplex>& simplices, const WeightExpr& e,
                            int n, const QuadratureOptions& opts) {
  if (auto q = e.to_poly(n)) return IntegralResult::from_exact(integrate_poly(simplices, *q, opts.exec));
  return adaptive_integrate(simplices, e, opts);
}

IntegralResult integrate_weight(const LabeledPolytope& p, const WeightExpr& e,
                                const QuadratureOptions& opts) {
  return integrate_on(measured(p.triangulate()), e, p.dim(), opts);
}

IntegralResult integrate_weight_boundary(const LabeledPolytope& p, const WeightExpr& e,
                                         const QuadratureOptions& opts) {
  if (auto q = e.to_poly(p.dim())) return IntegralResult::from_exact(integrate_poly_boundary(p, *q));
  return adaptive_integrate(boundary_simplices(p.polytope(), p.facets()), e, opts);
}

MonteCarloResult monte_carlo(const Polytope& p, const WeightExpr& e, std::size_t samples,
                             std::uint64_t seed, Exec exec) {
  constexpr std::size_t chunk = 1 << 14;
  const auto simplices = p.triangulate();
  const std::size_t n = static_cast<std::size_t>(p.dim());
  std::vector<std::vector<std::vector<double>>> pts;
  std::vector<double> cumulative;
  double total = 0;
  for (const auto& s : simplices) {
    std::vector<std::vector<double>> sp;
    for (const auto& q : s.points) sp.push_back(to_double(q));
    pts.push_back(std::move(sp));
    total += s.volume().get_d();
    cumulative.push_back(total);
  }
  const double volume = total;

  struct Moments {
    std::size_t count = 0;
    double mean = 0;
    double m2 = 0;
  };
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  auto parts = kernels::map<Moments>(
      chunks,
      [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::exponential_distribution<double> expo(1.0);
        const std::size_t count = std::min(chunk, samples - c * chunk);
        Moments m;
        std::vector<double> x(n), lambda(n + 1);
        for (std::size_t s = 0; s < count; ++s) {
          const double u = uni(rng) * volume;
          std::size_t idx = static_cast<std::size_t>(
              std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
          idx = std::min(idx, pts.size() - 1);
          double norm = 0;
          for (auto& l : lambda) norm += (l = expo(rng));
          std::fill(x.begin(), x.end(), 0.0);
          for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t k = 0; k < n; ++k) x[k] += lambda[j] / norm * pts[idx][j][k];
          const double f = volume * e(x);
          ++m.count;
          const double delta = f - m.mean;
          m.mean += delta / static_cast<double>(m.count);
          m.m2 += delta * (f - m.mean);
        }
        return m;
      },
      exec);

  Moments all;
  for (const auto& m : parts) {
    if (m.count == 0) continue;
    const std::size_t total_count = all.count + m.count;
    const double delta = m.mean - all.mean;
    all.mean += delta * static_cast<double>(m.count) / static_cast<double>(total_count);
    all.m2 += m.m2 + delta * delta * static_cast<double>(all.count) * static_cast<double>(m.count) /
                         static_cast<double>(total_count);
    all.count = total_count;
  }
  MonteCarloResult r;
  r.samples = all.count;
  r.mean = all.mean;
  if (all.count > 1)
    r.stderr_ = std::sqrt(all.m2 / static_cast<double>(all.count - 1) / static_cast<double>(all.count));
  return r;
}

}  // namespace wkstab
