#include "wkstab/weights.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "wkstab/error.hpp"
#include "wkstab/grid.hpp"

namespace wkstab {

using Kind = WeightExpr::Kind;

WeightExpr soliton_w(const WeightExpr& v, int n) {
  return WeightExpr::product(
      {WeightExpr::scalar(2), WeightExpr::product({WeightExpr::scalar(n), v}) + v.euler(n)});
}

WeightExpr tilde_v(const WeightExpr& v, int n) {
  return WeightExpr::scalar(n) + WeightExpr::quotient(v.euler(n), v);
}

namespace {

Rational min_over_vertices(const AffineFunctional& l, const Polytope& p) {
  Rational m = l(p.vertices().front());
  for (const auto& v : p.vertices()) m = std::min(m, l(v));
  return m;
}

bool positive_affine(const AffineFunctional& l, const Polytope& p) {
  return min_over_vertices(l, p) > 0;
}

// Degree <= 1 polynomial as an affine functional.
std::optional<AffineFunctional> as_affine(const MultiPoly& q) {
  if (q.degree() > 1) return std::nullopt;
  const int n = q.dim();
  AffineFunctional l = AffineFunctional::constant(n, 0);
  for (const auto& [e, c] : q.terms()) {
    int i = 0;
    while (i < n && e[i] == 0) ++i;
    if (i == n) l.c = c;
    else l.u[i] = c;
  }
  return l;
}

}  // namespace

WeightPair cone_weights(const AffineFunctional& ell, const Rational& a, const LabeledPolytope& p) {
  const int n = p.dim();
  for (const auto& v : p.vertices())
    if (ell(v) <= 0) throw Error("NotPositive", "affine function " + ell.str() + " is not positive on the polytope");
  WeightPair pair;
  pair.v = WeightExpr::affpow(ell, Rational(-n - 1));
  pair.w = WeightExpr::product({WeightExpr::scalar(a), WeightExpr::affpow(ell, Rational(-n - 2))});
  PositivityStatus pos;
  pos.min = to_double(min_over_vertices(ell, p.polytope()));
  pair.v_positive = pos;
  return pair;
}

bool certify_positive(const WeightExpr& e, const Polytope& p) {
  switch (e.kind()) {
    case Kind::scalar: return e.scalar_value() > 0;
    case Kind::expaff: return true;
    case Kind::affpow: return positive_affine(e.affine_data(), p);
    case Kind::poly: {
      auto l = as_affine(e.poly_data());
      return l && positive_affine(*l, p);
    }
    case Kind::sum:
    case Kind::product:
    case Kind::quotient:
      for (const auto& a : e.args())
        if (!certify_positive(a, p)) return false;
      return true;
  }
  return false;
}

bool certify_log_concave(const WeightExpr& e, const Polytope& p) {
  switch (e.kind()) {
    case Kind::scalar: return e.scalar_value() > 0;
    case Kind::expaff: return true;
    case Kind::affpow: return e.exponent_value() >= 0 && positive_affine(e.affine_data(), p);
    case Kind::poly: {
      auto l = as_affine(e.poly_data());
      return l && positive_affine(*l, p);
    }
    case Kind::product:
      for (const auto& a : e.args())
        if (!certify_log_concave(a, p)) return false;
      return true;
    case Kind::quotient: {
      // a / b with log b affine or convex: b = e^ℓ, b = c > 0, or b = ℓ^m with m <= 0.
      const auto& b = e.args()[1];
      bool den_ok = (b.kind() == Kind::expaff) || (b.kind() == Kind::scalar && b.scalar_value() > 0) ||
                    (b.kind() == Kind::affpow && b.exponent_value() <= 0 &&
                     positive_affine(b.affine_data(), p));
      return den_ok && certify_log_concave(e.args()[0], p);
    }
    case Kind::sum: return false;
  }
  return false;
}

PositivityStatus is_positive_on(const WeightExpr& e, const LabeledPolytope& p, int grid_depth,
                                Exec exec) {
  PositivityStatus status;
  if (certify_positive(e, p.polytope())) {
    status.kind = PositivityStatus::Kind::certified;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : p.vertices()) {
      auto x = to_double(v);
      double val = e(x);
      if (val < best) {
        best = val;
        status.argmin = x;
      }
    }
    status.min = best;
    return status;
  }
  const SampleGrid grid = barycentric_grid(p, grid_depth);
  auto m = kernels::scan_min(
      grid.points.size(),
      [&](std::size_t i) {
        try {
          return e(grid.points[i]);
        } catch (const Error&) {
          return -std::numeric_limits<double>::infinity();
        }
      },
      exec);
  status.min = m.value;
  status.argmin = grid.points[m.index];
  status.kind = m.value > 0 ? PositivityStatus::Kind::sampled_positive : PositivityStatus::Kind::failed;
  return status;
}

LogConcavityStatus sampled_log_concavity(const WeightExpr& e, const LabeledPolytope& p,
                                         int grid_depth, double tol, Exec exec) {
  const int n = p.dim();
  const SampleGrid grid = barycentric_grid(p, grid_depth);
  auto eig = kernels::map<double>(
      grid.points.size(),
      [&](std::size_t i) {
        Jet j = e.jet(grid.points[i]);
        if (!(j.value > 0)) throw Error("DomainError", "weight is not positive at a sample point");
        Eigen::MatrixXd h(n, n);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c)
            h(r, c) = j.hess[r * n + c] / j.value - j.grad[r] * j.grad[c] / (j.value * j.value);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().maxCoeff();
      },
      exec);
  LogConcavityStatus status;
  std::size_t worst = 0;
  for (std::size_t i = 1; i < eig.size(); ++i)
    if (eig[i] > eig[worst]) worst = i;
  status.max_eigenvalue = eig[worst];
  status.at = grid.points[worst];
  status.kind = eig[worst] <= tol ? LogConcavityStatus::Kind::sampled_concave
                                  : LogConcavityStatus::Kind::failed;
  return status;
}

LogConcavityStatus is_log_concave_on(const WeightExpr& e, const LabeledPolytope& p, int grid_depth,
                                     double tol, Exec exec) {
  if (certify_log_concave(e, p.polytope())) return {};
  return sampled_log_concavity(e, p, grid_depth, tol, exec);
}

Box bounding_box(const Polytope& p) {
  Box box;
  for (int k = 0; k < p.dim(); ++k) {
    Rational lo = p.vertices().front()[k], hi = lo;
    for (const auto& v : p.vertices()) {
      lo = std::min(lo, v[k]);
      hi = std::max(hi, v[k]);
    }
    box.emplace_back(lo, hi);
  }
  return box;
}

MultiPoly bernstein_approx(const Sampler& f, const Box& box, int degree, Exec exec) {
  const int n = static_cast<int>(box.size());
  if (degree < 0) throw Error("input", "Bernstein degree must be nonnegative");
  for (const auto& [lo, hi] : box)
    if (!(hi > lo)) throw Error("input", "Bernstein box has an empty side");

  // basis[i][k] = C(d,k) t^k (1-t)^(d-k), t = (x_i - lo_i) / (hi_i - lo_i)
  std::vector<std::vector<MultiPoly>> basis(n);
  for (int i = 0; i < n; ++i) {
    const auto& [lo, hi] = box[i];
    Rational inv = 1 / (hi - lo);
    MultiPoly t = MultiPoly::variable(n, i);
    t -= MultiPoly::constant(n, lo);
    t *= inv;
    MultiPoly one_minus_t = MultiPoly::constant(n, 1) - t;
    mpz_class binom;
    for (int k = 0; k <= degree; ++k) {
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(degree), static_cast<unsigned long>(k));
      basis[i].push_back(Rational(binom) * (t.pow(k) * one_minus_t.pow(degree - k)));
    }
  }

  std::size_t nodes = 1;
  for (int i = 0; i < n; ++i) nodes *= static_cast<std::size_t>(degree + 1);
  auto index_of = [&](std::size_t flat) {
    std::vector<int> k(n);
    for (int i = n - 1; i >= 0; --i) {
      k[i] = static_cast<int>(flat % (degree + 1));
      flat /= (degree + 1);
    }
    return k;
  };
  auto samples = kernels::map<double>(
      nodes,
      [&](std::size_t flat) {
        auto k = index_of(flat);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) {
          const auto& [lo, hi] = box[i];
          Rational xi = degree == 0 ? lo : lo + (hi - lo) * Rational(k[i]) / degree;
          x[i] = xi.get_d();
        }
        return f(x);
      },
      exec);

  MultiPoly result(n);
  for (std::size_t flat = 0; flat < nodes; ++flat) {
    if (samples[flat] == 0) continue;
    auto k = index_of(flat);
    MultiPoly term = MultiPoly::constant(n, from_double(samples[flat]));
    for (int i = 0; i < n; ++i) term = term * basis[i][k[i]];
    result += term;
  }
  return result;
}

double sup_error_on_grid(const WeightExpr& e1, const WeightExpr& e2, const LabeledPolytope& p,
                         int grid_depth, Exec exec) {
  const SampleGrid grid = barycentric_grid(p, grid_depth);
  auto m = kernels::scan_min(
      grid.points.size(),
      [&](std::size_t i) { return -std::abs(e1(grid.points[i]) - e2(grid.points[i])); }, exec);
  return -m.value;
}

}  // namespace wkstab
