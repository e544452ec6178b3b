#include "wkstab/io.hpp"

#include <fstream>
#include <sstream>

#include "wkstab/error.hpp"

namespace wkstab::io {

namespace {

[[noreturn]] void fail(const std::string& location, const std::string& message) {
  throw Error("parse", message, location);
}

const json& member(const json& j, const char* key, const std::string& location) {
  if (!j.is_object()) fail(location, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(location, std::string("missing field '") + key + "'");
  return *it;
}

int int_from(const json& j, const std::string& location) {
  if (!j.is_number_integer()) fail(location, "expected an integer");
  return j.get<int>();
}

RVec rvec_from(const json& j, int n, const std::string& location, bool integers_only) {
  if (!j.is_array()) fail(location, "expected an array");
  if (n >= 0 && static_cast<int>(j.size()) != n)
    fail(location, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  RVec out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = location + "[" + std::to_string(i) + "]";
    if (integers_only) {
      if (!j[i].is_number_integer()) fail(where, "expected an integer");
      out.emplace_back(j[i].get<long>());
    } else {
      out.push_back(rational_from(j[i], where));
    }
  }
  return out;
}

AffineFunctional affine_from(const json& j, int n, const std::string& location) {
  return {rvec_from(member(j, "normal", location), n, location + ".normal", false),
          rational_from(member(j, "offset", location), location + ".offset")};
}

// Facet normals and factor vectors are integral and are read back as JSON integers.
json integer_array(const RVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.get_num().get_si());
  return out;
}

json affine_fields(const AffineFunctional& l) { return {{"normal", to_json(l.u)}, {"offset", to_json(l.c)}}; }

}  // namespace

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("parse", e.what(), source.empty() ? "byte " + std::to_string(e.byte) : source);
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path);
}

Rational rational_from(const json& j, const std::string& location, bool allow_float) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw Error("parse", e.what(), location);
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) {
    if (allow_float) return from_double(j.get<double>());
    fail(location, "rationals must be strings or integers, not floats");
  }
  fail(location, "expected a rational");
}

json to_json(const Rational& q) { return to_string(q); }

json to_json(const RVec& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

json to_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

LabeledPolytope polytope_from_json(const json& j) {
  const int n = int_from(member(j, "dim", "polytope"), "polytope.dim");
  if (n < 1) fail("polytope.dim", "dimension must be positive");
  const json& facets = member(j, "facets", "polytope");
  if (!facets.is_array()) fail("polytope.facets", "expected an array");
  std::vector<AffineFunctional> labels;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const std::string where = "polytope.facets[" + std::to_string(i) + "]";
    labels.emplace_back(rvec_from(member(facets[i], "normal", where), n, where + ".normal", true),
                        rational_from(member(facets[i], "offset", where), where + ".offset"));
  }
  return LabeledPolytope::from_facets(n, std::move(labels));
}

json to_json(const LabeledPolytope& p) {
  json facets = json::array();
  for (const auto& l : p.facets()) facets.push_back({{"normal", integer_array(l.u)}, {"offset", to_json(l.c)}});
  return {{"dim", p.dim()}, {"facets", facets}};
}

WeightExpr weight_from_json(const json& j, int n, const std::string& location) {
  const json& kind_j = member(j, "kind", location);
  if (!kind_j.is_string()) fail(location + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();

  if (kind == "scalar") return WeightExpr::scalar(rational_from(member(j, "value", location), location + ".value"));
  if (kind == "poly") {
    const json& terms = member(j, "terms", location);
    if (!terms.is_array()) fail(location + ".terms", "expected an array");
    MultiPoly p(n);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string where = location + ".terms[" + std::to_string(t) + "]";
      const json& exp = member(terms[t], "exp", where);
      if (!exp.is_array() || static_cast<int>(exp.size()) != n)
        fail(where + ".exp", "expected " + std::to_string(n) + " exponents");
      Exponent e;
      for (std::size_t i = 0; i < exp.size(); ++i) {
        int k = int_from(exp[i], where + ".exp");
        if (k < 0) fail(where + ".exp", "exponents must be nonnegative");
        e.push_back(k);
      }
      p.add_term(e, rational_from(member(terms[t], "coef", where), where + ".coef"));
    }
    return WeightExpr::poly(std::move(p));
  }
  if (kind == "affpow") {
    AffineFunctional base = affine_from(j, n, location);
    const json& e = member(j, "exponent", location);
    if (e.is_number_float()) return WeightExpr::affpow_real(std::move(base), e.get<double>());
    return WeightExpr::affpow(std::move(base), rational_from(e, location + ".exponent"));
  }
  if (kind == "expaff") return WeightExpr::expaff(affine_from(j, n, location));
  if (kind == "sum" || kind == "product" || kind == "quotient") {
    const json& args = member(j, "args", location);
    if (!args.is_array()) fail(location + ".args", "expected an array");
    std::vector<WeightExpr> parts;
    for (std::size_t i = 0; i < args.size(); ++i)
      parts.push_back(weight_from_json(args[i], n, location + ".args[" + std::to_string(i) + "]"));
    if (kind == "sum") {
      if (parts.empty()) fail(location + ".args", "sum needs at least one term");
      return WeightExpr::sum(std::move(parts));
    }
    if (kind == "product") {
      if (parts.empty()) fail(location + ".args", "product needs at least one factor");
      return WeightExpr::product(std::move(parts));
    }
    if (parts.size() != 2) fail(location + ".args", "quotient needs exactly two arguments");
    return WeightExpr::quotient(std::move(parts[0]), std::move(parts[1]));
  }
  fail(location + ".kind", "unknown weight kind '" + kind + "'");
}

json to_json(const WeightExpr& e) {
  using K = WeightExpr::Kind;
  switch (e.kind()) {
    case K::scalar:
      return {{"kind", "scalar"}, {"value", to_json(e.scalar_value())}};
    case K::poly: {
      json terms = json::array();
      for (const auto& [exp, coef] : e.poly_data().terms()) terms.push_back({{"exp", exp}, {"coef", to_json(coef)}});
      return {{"kind", "poly"}, {"terms", terms}};
    }
    case K::affpow: {
      json out = affine_fields(e.affine_data());
      out["kind"] = "affpow";
      if (e.exponent_exact()) out["exponent"] = to_json(e.exponent());
      else out["exponent"] = e.exponent_value();
      return out;
    }
    case K::expaff: {
      json out = affine_fields(e.affine_data());
      out["kind"] = "expaff";
      return out;
    }
    case K::sum:
    case K::product:
    case K::quotient: {
      json args = json::array();
      for (const auto& a : e.args()) args.push_back(to_json(a));
      const char* name = e.kind() == K::sum ? "sum" : e.kind() == K::product ? "product" : "quotient";
      return {{"kind", name}, {"args", args}};
    }
  }
  return nullptr;
}

PLConvexFunction pl_from_json(const json& j, int n) {
  const json& pieces = member(j, "pieces", "f");
  if (!pieces.is_array() || pieces.empty()) fail("f.pieces", "expected a nonempty array");
  PLConvexFunction f;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    f.pieces.push_back(affine_from(pieces[i], n, "f.pieces[" + std::to_string(i) + "]"));
  return f;
}

json to_json(const AffineFunctional& l) { return affine_fields(l); }

json to_json(const PLConvexFunction& f) {
  json pieces = json::array();
  for (const auto& l : f.pieces) pieces.push_back(affine_fields(l));
  return {{"pieces", pieces}};
}

FibrationData fibration_from_json(const json& j, int n) {
  const json& factors = member(j, "factors", "fibration");
  if (!factors.is_array()) fail("fibration.factors", "expected an array");
  FibrationData d;
  for (std::size_t a = 0; a < factors.size(); ++a) {
    const std::string where = "fibration.factors[" + std::to_string(a) + "]";
    const json& pj = member(factors[a], "p", where);
    if (!pj.is_array() || static_cast<int>(pj.size()) != n)
      fail(where + ".p", "expected " + std::to_string(n) + " entries");
    BaseFactor f;
    for (std::size_t i = 0; i < pj.size(); ++i) {
      if (!pj[i].is_number_integer())
        throw Error("input", "factor vector p must be integral", where + ".p");
      f.p.emplace_back(pj[i].get<long>());
    }
    f.c = rational_from(member(factors[a], "c", where), where + ".c");
    f.m = int_from(member(factors[a], "m", where), where + ".m");
    if (f.m < 1) throw Error("input", "m must be a positive integer", where + ".m");
    f.scal = rational_from(member(factors[a], "scal", where), where + ".scal", true);
    d.factors.push_back(std::move(f));
  }
  return d;
}

json to_json(const FibrationData& d) {
  json factors = json::array();
  for (const auto& f : d.factors)
    factors.push_back({{"p", integer_array(f.p)}, {"c", to_json(f.c)}, {"m", f.m}, {"scal", to_json(f.scal)}});
  return {{"factors", factors}};
}

json to_json(const DelzantReport& r) {
  json out = {{"ok", r.ok}};
  if (!r.ok) out["reason"] = r.reason;
  if (r.vertex) out["vertex"] = to_json(*r.vertex);
  if (r.facet) out["facet"] = *r.facet;
  if (r.determinant) out["determinant"] = to_json(*r.determinant);
  return out;
}

json to_json(const IntegralResult& r) {
  json out = {{"value", r.value}, {"exact", r.exact}, {"error_bound", r.error_bound}};
  if (r.exact_value) out["exact_value"] = to_json(*r.exact_value);
  return out;
}

json to_json(const FutakiReport& r) {
  json out = {{"value", r.value},
              {"error_bound", r.error_bound},
              {"boundary_term", r.boundary_term},
              {"interior_term", r.interior_term},
              {"exact", r.exact}};
  if (r.exact_value) {
    out["exact_value"] = to_json(*r.exact_value);
    out["exact_boundary_term"] = to_json(*r.exact_boundary);
    out["exact_interior_term"] = to_json(*r.exact_interior);
  }
  if (r.degenerate_pieces) out["degenerate_pieces"] = true;
  return out;
}

json to_json(const ExtremalResult& r) {
  return {{"ell", affine_fields(r.ell)},
          {"exact", r.exact},
          {"residuals", to_json(r.residuals)},
          {"condition", r.condition},
          {"ill_conditioned", r.ill_conditioned},
          {"verified", r.verified}};
}

json to_json(const PositivityStatus& s) {
  using K = PositivityStatus::Kind;
  const char* kind = s.kind == K::certified ? "Certified" : s.kind == K::sampled_positive ? "SampledPositive" : "FailedAt";
  json out = {{"status", kind}};
  if (s.kind != K::certified) {
    out["min"] = s.min;
    out["argmin"] = to_json(s.argmin);
  }
  return out;
}

json to_json(const LogConcavityStatus& s) {
  using K = LogConcavityStatus::Kind;
  const char* kind = s.kind == K::certified ? "Certified" : s.kind == K::sampled_concave ? "SampledConcave" : "FailedAt";
  json out = {{"status", kind}};
  if (s.kind != K::certified) {
    out["max_eigenvalue"] = s.max_eigenvalue;
    out["at"] = to_json(s.at);
  }
  return out;
}

json to_json(const WeightPair& p) {
  json out = {{"v", to_json(p.v)}, {"w", to_json(p.w)}};
  if (p.v_positive) out["v_positive"] = to_json(*p.v_positive);
  if (p.v_log_concave) out["v_log_concave"] = to_json(*p.v_log_concave);
  if (p.normalization_residual) out["normalization_residual"] = *p.normalization_residual;
  return out;
}

json to_json(const StabilityReport& r) {
  return {{"verdict", r.verdict == StabilityReport::Verdict::holds ? "Holds" : "Inconclusive"},
          {"margin", r.margin},
          {"certified_lower_bound", r.certified_lower_bound},
          {"certified", r.certified},
          {"lipschitz", r.lipschitz},
          {"mesh", r.mesh},
          {"argmin", to_json(r.argmin)},
          {"cone_index", r.cone_index},
          {"cone_minima", to_json(r.cone_minima)},
          {"grid_depth", r.grid_depth},
          {"x0", to_json(r.x0)}};
}

json to_json(const DestabilizerReport& r) {
  json out = {{"family", "one-crease PL (PL-restricted search)"},
              {"family_size", r.family_size},
              {"threshold", r.threshold},
              {"below_threshold", r.below_threshold},
              {"all_above_threshold", r.all_above_threshold},
              {"best_ratio", r.best_ratio},
              {"x0", to_json(r.x0)}};
  if (r.best_f) out["best_f"] = to_json(*r.best_f);
  if (r.best_exact_ratio) out["best_exact_ratio"] = to_json(*r.best_exact_ratio);
  out["ratios"] = to_json(r.ratios);
  return out;
}

json to_json(const FactorPositivity& r) {
  return {{"factor", r.factor}, {"min", to_json(r.min)}, {"argmin", to_json(r.argmin)}, {"ok", r.ok}};
}

json error_json(const std::string& code, const std::string& message, const std::string& location) {
  return {{"code", code}, {"message", message}, {"location", location}};
}

}  // namespace wkstab::io
