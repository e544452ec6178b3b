#pragma once

// JSON reading and writing. Rationals always travel as strings ("p/q" or
// decimal); doubles in reports are plain JSON numbers.

#include <json.hpp>
#include <string>
#include <string_view>

#include "wkstab/fibration.hpp"
#include "wkstab/futaki.hpp"
#include "wkstab/polytope.hpp"
#include "wkstab/quadrature.hpp"
#include "wkstab/stability.hpp"
#include "wkstab/weights.hpp"

namespace wkstab::io {

using nlohmann::json;

/// Parses text; throws Error("parse") with the byte offset on failure.
json parse_json(std::string_view text, const std::string& source = {});
json read_json_file(const std::string& path);

/// Accepts "p/q" / decimal strings and JSON integers. Floats are accepted
/// only when `allow_float` is set, and are then converted exactly.
Rational rational_from(const json& j, const std::string& location, bool allow_float = false);
json to_json(const Rational& q);
json to_json(const RVec& v);
json to_json(const std::vector<double>& v);

LabeledPolytope polytope_from_json(const json& j);
json to_json(const LabeledPolytope& p);

WeightExpr weight_from_json(const json& j, int n, const std::string& location = "weight");
json to_json(const WeightExpr& e);

/// {"pieces":[{"normal":[..],"offset":"p/q"}, ...]}
PLConvexFunction pl_from_json(const json& j, int n);
json to_json(const PLConvexFunction& f);
json to_json(const AffineFunctional& l);

FibrationData fibration_from_json(const json& j, int n);
json to_json(const FibrationData& d);

json to_json(const DelzantReport& r);
json to_json(const IntegralResult& r);
json to_json(const FutakiReport& r);
json to_json(const ExtremalResult& r);
json to_json(const PositivityStatus& s);
json to_json(const LogConcavityStatus& s);
json to_json(const WeightPair& p);
json to_json(const StabilityReport& r);
json to_json(const DestabilizerReport& r);
json to_json(const FactorPositivity& r);

json error_json(const std::string& code, const std::string& message, const std::string& location);

}  // namespace wkstab::io
