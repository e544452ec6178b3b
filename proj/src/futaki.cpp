#include "wkstab/futaki.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wkstab/error.hpp"
#include "wkstab/weights.hpp"

namespace wkstab {

Rational PLConvexFunction::operator()(const RVec& x) const {
  Rational best = pieces.front()(x);
  for (const auto& l : pieces) best = std::max(best, l(x));
  return best;
}

double PLConvexFunction::operator()(std::span<const double> x) const {
  double best = pieces.front()(x);
  for (const auto& l : pieces) best = std::max(best, l(x));
  return best;
}

PLConvexFunction PLConvexFunction::deduplicated() const {
  PLConvexFunction out;
  for (const auto& l : pieces)
    if (std::find(out.pieces.begin(), out.pieces.end(), l) == out.pieces.end()) out.pieces.push_back(l);
  return out;
}

std::vector<PLCell> pl_cells(const Polytope& p, const PLConvexFunction& f) {
  std::vector<PLCell> cells;
  const auto& pieces = f.pieces;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    auto hs = p.halfspaces();
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (i != k) hs.push_back(pieces[k] - pieces[i]);
    if (auto cell = Polytope::from_halfspaces(p.dim(), std::move(hs)))
      cells.push_back({std::move(*cell), static_cast<int>(k)});
  }
  return cells;
}

namespace {

FutakiReport assemble(const IntegralResult& boundary, const IntegralResult& interior) {
  FutakiReport r;
  r.boundary_term = boundary.value;
  r.interior_term = interior.value;
  r.exact = boundary.exact && interior.exact;
  if (r.exact) {
    r.exact_boundary = *boundary.exact_value;
    r.exact_interior = *interior.exact_value;
    r.exact_value = 2 * *r.exact_boundary - *r.exact_interior;
    r.value = r.exact_value->get_d();
  } else {
    r.value = 2 * boundary.value - interior.value;
    r.error_bound = 2 * boundary.error_bound + interior.error_bound;
  }
  return r;
}

IntegralResult add(const IntegralResult& a, const IntegralResult& b) {
  IntegralResult r;
  r.exact = a.exact && b.exact;
  if (r.exact) {
    r.exact_value = *a.exact_value + *b.exact_value;
    r.value = r.exact_value->get_d();
  } else {
    r.value = a.value + b.value;
    r.error_bound = a.error_bound + b.error_bound;
  }
  return r;
}

}  // namespace

FutakiReport futaki_affine(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                           const AffineFunctional& ell, const QuadratureOptions& opts) {
  const WeightExpr l = WeightExpr::affine(ell);
  IntegralResult boundary = integrate_weight_boundary(p, l * v, opts);
  IntegralResult interior = integrate_weight(p, l * w, opts);
  return assemble(boundary, interior);
}

FutakiReport futaki_pl(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                       const PLConvexFunction& f, const QuadratureOptions& opts) {
  const PLConvexFunction g = f.deduplicated();
  const int n = p.dim();
  IntegralResult boundary = IntegralResult::from_exact(0);
  IntegralResult interior = IntegralResult::from_exact(0);
  for (const auto& cell : pl_cells(p.polytope(), g)) {
    const WeightExpr l = WeightExpr::affine(g.pieces[cell.piece]);
    interior = add(interior, integrate_on(measured(cell.cell.triangulate()), l * w, n, opts));
    boundary = add(boundary, integrate_on(boundary_simplices(cell.cell, p.facets()), l * v, n, opts));
  }
  FutakiReport r = assemble(boundary, interior);
  r.degenerate_pieces = g.pieces.size() != f.pieces.size();
  return r;
}

Rational integrate_pl(const Polytope& p, const PLConvexFunction& f, Exec exec) {
  const PLConvexFunction g = f.deduplicated();
  Rational acc = 0;
  for (const auto& cell : pl_cells(p, g))
    acc += integrate_poly(cell.cell, MultiPoly::affine(g.pieces[cell.piece]), exec);
  return acc;
}

ExtremalResult extremal_affine(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w0,
                               const QuadratureOptions& opts, int grid_depth) {
  const int n = p.dim();
  if (!is_positive_on(w0, p, grid_depth, opts.exec).positive())
    throw Error("NotPositive", "w0 is not positive on the polytope");
  if (!is_positive_on(v, p, grid_depth, opts.exec).positive())
    throw Error("NotPositive", "v is not positive on the polytope");

  std::vector<AffineFunctional> basis;
  basis.push_back(AffineFunctional::constant(n, 1));
  for (int i = 0; i < n; ++i) basis.push_back(AffineFunctional::coordinate(n, i));
  const int size = n + 1;

  ExtremalResult result;
  auto v_poly = v.to_poly(n);
  auto w0_poly = w0.to_poly(n);
  if (v_poly && w0_poly) {
    RMatrix m(size, RVec(size));
    RVec b(size);
    for (int a = 0; a < size; ++a) {
      MultiPoly ea = MultiPoly::affine(basis[a]);
      for (int c = a; c < size; ++c) {
        m[a][c] = integrate_poly(p, ea * MultiPoly::affine(basis[c]) * *w0_poly, opts.exec);
        m[c][a] = m[a][c];
      }
      b[a] = 2 * integrate_poly_boundary(p, ea * *v_poly);
    }
    auto c = solve(m, b);
    if (!c) throw Error("IllConditioned", "Gram matrix is singular");
    result.exact = true;
    result.ell = AffineFunctional(RVec(c->begin() + 1, c->end()), (*c)[0]);
    Eigen::MatrixXd md(size, size);
    for (int a = 0; a < size; ++a)
      for (int k = 0; k < size; ++k) md(a, k) = m[a][k].get_d();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(md, Eigen::EigenvaluesOnly);
    result.condition = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  } else {
    Eigen::MatrixXd m(size, size);
    Eigen::VectorXd b(size);
    for (int a = 0; a < size; ++a) {
      WeightExpr ea = WeightExpr::affine(basis[a]);
      for (int c = a; c < size; ++c) {
        m(a, c) = integrate_weight(p, ea * WeightExpr::affine(basis[c]) * w0, opts).value;
        m(c, a) = m(a, c);
      }
      b(a) = 2 * integrate_weight_boundary(p, ea * v, opts).value;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    Eigen::VectorXd c = ldlt.solve(b);
    for (int it = 0; it < 3; ++it) c += ldlt.solve(b - m * c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    result.condition = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    RVec u(n);
    for (int i = 0; i < n; ++i) u[i] = from_double(c(i + 1));
    result.ell = AffineFunctional(std::move(u), from_double(c(0)));
  }
  result.ill_conditioned = !(result.condition < 1e12);

  const WeightExpr target = WeightExpr::affine(result.ell) * w0;
  result.verified = true;
  for (const auto& e : basis) {
    FutakiReport r = futaki_affine(p, v, target, e, opts);
    result.residuals.push_back(r.value);
    if (!(std::abs(r.value) <= 10 * opts.tol)) result.verified = false;
  }
  return result;
}

FutakiReport normalization_residual(const LabeledPolytope& p, const WeightExpr& v,
                                    const WeightExpr& w, const QuadratureOptions& opts) {
  return futaki_affine(p, v, w, AffineFunctional::constant(p.dim(), 1), opts);
}

WeightExpr normalize_w(const LabeledPolytope& p, const WeightExpr& v, const WeightExpr& w,
                       const QuadratureOptions& opts) {
  FutakiReport r = normalization_residual(p, v, w, opts);
  const Rational vol = p.volume();
  Rational kappa = r.exact ? Rational(*r.exact_value / vol) : from_double(r.value / vol.get_d());
  return w + WeightExpr::scalar(kappa);
}

}  // namespace wkstab
