#include "wkstab/fibration.hpp"

#include "wkstab/error.hpp"

namespace wkstab {

namespace {

void check_factor(const LabeledPolytope& p, const BaseFactor& f, std::size_t a) {
  const std::string where = "factors[" + std::to_string(a) + "]";
  if (static_cast<int>(f.p.size()) != p.dim()) throw Error("input", "factor has wrong dimension", where);
  for (const auto& pi : f.p)
    if (pi.get_den() != 1) throw Error("input", "factor vector p must be integral", where);
  if (f.m < 1) throw Error("input", "factor dimension m must be a positive integer", where);
}

}  // namespace

std::vector<FactorPositivity> check_positivity(const LabeledPolytope& p, const FibrationData& data) {
  std::vector<FactorPositivity> out;
  for (std::size_t a = 0; a < data.factors.size(); ++a) {
    check_factor(p, data.factors[a], a);
    const AffineFunctional l = data.factors[a].affine();
    FactorPositivity r;
    r.factor = static_cast<int>(a);
    r.argmin = p.vertices().front();
    r.min = l(r.argmin);
    for (const auto& v : p.vertices()) {
      Rational s = l(v);
      if (s < r.min) {
        r.min = s;
        r.argmin = v;
      }
    }
    r.ok = r.min > 0;
    out.push_back(std::move(r));
  }
  return out;
}

WeightPair fibration_weights(const LabeledPolytope& p, const FibrationData& data, const WeightExpr& v,
                             const WeightExpr& w, int grid_depth, Exec exec) {
  for (const auto& r : check_positivity(p, data))
    if (!r.ok)
      throw Error("NotPositive",
                  "factor " + std::to_string(r.factor) + " has minimum " + r.min.get_str() +
                      " over the vertices",
                  "factors[" + std::to_string(r.factor) + "]");

  std::vector<WeightExpr> v_factors;
  std::vector<WeightExpr> w_terms{w};
  for (const auto& f : data.factors) {
    v_factors.push_back(WeightExpr::affpow(f.affine(), Rational(f.m)));
    if (f.scal != 0)
      w_terms.push_back(WeightExpr::product(
          {WeightExpr::scalar(-f.scal), WeightExpr::affpow(f.affine(), Rational(-1))}));
  }
  WeightPair pair;
  if (v_factors.empty()) {
    pair.v = v;
  } else {
    v_factors.push_back(v);
    pair.v = WeightExpr::product(std::move(v_factors));
  }
  pair.w = w_terms.size() == 1 ? w : WeightExpr::sum(std::move(w_terms));
  pair.v_positive = is_positive_on(pair.v, p, grid_depth, exec);
  pair.v_log_concave = is_log_concave_on(pair.v, p, grid_depth, 1e-9, exec);
  return pair;
}

FiberedStability fibered_stability(const LabeledPolytope& p, const FibrationData& data,
                                   const WeightExpr& v, const WeightExpr& w, std::optional<RVec> x0,
                                   int grid_depth, const SearchOptions& opts) {
  FiberedStability out;
  out.transformed = fibration_weights(p, data, v, w, grid_depth, opts.quad.exec);
  out.stability = sufficient_condition(p, out.transformed.v, out.transformed.w, x0, grid_depth,
                                       opts.quad.exec);
  out.search = destabilizer_search(p, out.transformed.v, out.transformed.w, x0, opts);
  return out;
}

}  // namespace wkstab
