#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wkstab/cli.hpp"
#include "wkstab/error.hpp"
#include "wkstab/io.hpp"

using namespace wkstab;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  json report;
  std::string text;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "wkstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  json report;
  if (!out.str().empty()) report = json::parse(out.str());
  return {code, report, out.str()};
}

std::string data(const char* name) { return std::string(WKSTAB_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
  std::string path = std::string(std::tmpnam(nullptr)) + "_" + name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_CASE("check-stability on the square") {
  Outcome o = run({"check-stability", "--polytope", data("square.json"), "--v", "one", "--w", "const:8"});
  CHECK(o.code == 0);
  CHECK(o.report["schema"] == "wkstab/1");
  CHECK(o.report["result"]["verdict"] == "Holds");
  CHECK(o.report["result"]["margin"].get<double>() == 2.0);
  CHECK(o.report["job"]["w"] == "const:8");
  CHECK(o.report["job"]["grid_depth"] == 4);

  Outcome bad = run({"check-stability", "--polytope", data("square.json"), "--w", "const:20"});
  CHECK(bad.code == 2);
  CHECK(bad.report["result"]["verdict"] == "Inconclusive");
}

TEST_CASE("futaki on the simplex") {
  Outcome o = run({"futaki", "--polytope", data("simplex.json"), "--v", "one", "--w", "const:12", "--ell", "1,0,0"});
  CHECK(o.code == 0);
  CHECK(o.report["result"]["value"].get<double>() == 0.0);
  CHECK(o.report["result"]["exact_value"] == "0");
  for (const char* key : {"value", "error_bound", "boundary_term", "interior_term"})
    CHECK(o.report["result"].contains(key));

  Outcome pl = run({"futaki", "--polytope", data("interval.json"), "--w", "const:4", "--f", data("crease_half.json")});
  CHECK(pl.report["result"]["exact_value"] == "1/2");

  Outcome none = run({"futaki", "--polytope", data("simplex.json"), "--w", "const:12"});
  CHECK(none.code == 1);
  CHECK(none.report["error"]["code"] == "input");
}

TEST_CASE("malformed input") {
  std::string path = temp_file("bad.json", "{\"dim\": 2, \"facets\": [");
  Outcome o = run({"validate", "--polytope", path});
  CHECK(o.code == 1);
  CHECK(o.report["error"]["code"] == "parse");
  for (const char* key : {"code", "message", "location"}) CHECK(o.report["error"].contains(key));
  std::remove(path.c_str());

  std::string unbounded = temp_file("unb.json", R"({"dim":2,"facets":[{"normal":[1,0],"offset":"0"},{"normal":[0,1],"offset":"0"},{"normal":[-1,0],"offset":"1"}]})");
  Outcome u = run({"validate", "--polytope", unbounded});
  CHECK(u.code == 1);
  CHECK(u.report["error"]["code"] == "Unbounded");
  std::remove(unbounded.c_str());

  std::string floaty = temp_file("float.json", R"({"dim":1,"facets":[{"normal":[1],"offset":0.5},{"normal":[-1],"offset":"1"}]})");
  Outcome f = run({"validate", "--polytope", floaty});
  CHECK(f.report["error"]["code"] == "parse");
  CHECK(f.report["error"]["location"] == "polytope.facets[0].offset");
  std::remove(floaty.c_str());

  Outcome flag = run({"check-stability", "--polytope", data("square.json"), "--w", "const:8", "--grid-depth", "20"});
  CHECK(flag.code == 1);
  Outcome weight = run({"check-stability", "--polytope", data("square.json"), "--w", "bogus"});
  CHECK(weight.report["error"]["code"] == "input");
  Outcome missing = run({"check-stability", "--polytope", data("nope.json"), "--w", "one"});
  CHECK(missing.code == 1);
  Outcome nosub = run({});
  CHECK(nosub.code == 1);
}

TEST_CASE("validate reports Delzant failures with exit 2") {
  std::string path = temp_file("tri.json", R"({"dim":2,"facets":[{"normal":[1,0],"offset":"0"},{"normal":[0,1],"offset":"0"},{"normal":[-1,-2],"offset":"2"}]})");
  Outcome o = run({"validate", "--polytope", path});
  CHECK(o.code == 2);
  CHECK(o.report["result"]["delzant"]["ok"] == false);
  std::remove(path.c_str());
  Outcome hex = run({"validate", "--polytope", data("hexagon.json")});
  CHECK(hex.code == 0);
  CHECK(hex.report["result"]["volume"] == "3");
}

TEST_CASE("every subcommand runs") {
  CHECK(run({"integrate", "--polytope", data("cube.json"), "--w", "expaff:1,0,0", "--samples", "1000"}).code == 0);
  Outcome ext = run({"extremal", "--polytope", data("square.json")});
  CHECK(ext.report["result"]["ell"]["offset"] == "8");
  Outcome norm = run({"normalize", "--polytope", data("simplex.json"), "--w", "zero"});
  CHECK(norm.report["result"]["w"]["value"] == "12");
  Outcome search = run({"search-destabilizer", "--polytope", data("interval.json"), "--w", "const:4", "--slope-bound", "1", "--offsets", "3"});
  CHECK(search.code == 0);
  CHECK(search.report["result"]["best_exact_ratio"] == "4");
  Outcome destab = run({"search-destabilizer", "--polytope", data("square.json"), "--w", "const:100", "--slope-bound", "1", "--offsets", "3"});
  CHECK(destab.code == 2);
  Outcome fib = run({"fibration", "--polytope", data("square.json"), "--w", "const:8", "--fibration", data("fibration_one.json")});
  CHECK(fib.code == 0);
  CHECK(fib.report["result"]["factor_positivity"][0]["min"] == "2");
  Outcome fibs = run({"fibration", "--polytope", data("square.json"), "--w", "const:8", "--fibration", data("fibration_one.json"), "--stability", "--slope-bound", "1", "--offsets", "2"});
  CHECK(fibs.code == 0);
  CHECK(fibs.report["result"]["stability"]["verdict"] == "Holds");
  Outcome sol = run({"weights", "--polytope", data("square.json"), "--family", "soliton", "--v", "one"});
  CHECK(sol.report["result"]["pair"]["w"]["value"] == "4");
  Outcome cone = run({"weights", "--polytope", data("interval.json"), "--family", "cone", "--ell", "1,1", "--a", "2"});
  CHECK(cone.report["result"]["pair"]["v"]["exponent"] == "-2");
  Outcome bern = run({"weights", "--polytope", data("interval.json"), "--family", "bernstein", "--v", R"({"kind":"poly","terms":[{"exp":[2],"coef":"1"}]})", "--degree", "2"});
  CHECK(bern.report["result"]["sup_error"].get<double>() == doctest::Approx(0.125));
  Outcome affpow = run({"weights", "--polytope", data("square.json"), "--family", "tilde", "--v", "affpow:3:2,1,0"});
  CHECK(affpow.code == 0);
  CHECK(affpow.report["result"]["pair"]["v_log_concave"]["status"] == "Certified");
}

TEST_CASE("reports are deterministic across runs and thread counts") {
  std::vector<std::string> args = {"search-destabilizer", "--polytope", data("hexagon.json"), "--v", "expaff:1,-1", "--w", "const:9", "--slope-bound", "1", "--offsets", "3"};
  Outcome a = run(args);
  auto with_threads = args;
  with_threads.insert(with_threads.end(), {"--threads", "1"});
  Outcome b = run(with_threads);
  CHECK(a.text == b.text);
  Outcome c = run(args);
  CHECK(a.text == c.text);
}

TEST_CASE("--out writes the report to a file") {
  std::string path = std::string(std::tmpnam(nullptr)) + "_report.json";
  Outcome o = run({"validate", "--polytope", data("square.json"), "--out", path});
  CHECK(o.code == 0);
  CHECK(o.text.empty());
  std::ifstream in(path);
  json j = json::parse(in);
  CHECK(j["result"]["delzant"]["ok"] == true);
  std::remove(path.c_str());
}

TEST_CASE("weight shorthand") {
  CHECK(cli::parse_weight_spec("one", 2, "--v").is_scalar(1));
  CHECK(cli::parse_weight_spec("zero", 2, "--v").is_scalar(0));
  CHECK(cli::parse_weight_spec("const:3/4", 2, "--v").is_scalar(Rational(3, 4)));
  auto e = cli::parse_weight_spec("expaff:1,2", 2, "--v");
  CHECK(e(std::vector<double>{1, 1}) == doctest::Approx(std::exp(3.0)));
  auto a = cli::parse_weight_spec("affpow:-1:2,1,0", 2, "--v");
  CHECK(a(std::vector<double>{0, 5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(cli::parse_weight_spec("expaff:1", 2, "--v"), Error);
  CHECK_THROWS_AS(cli::parse_weight_spec("affpow:2,1,0", 2, "--v"), Error);
  CHECK_THROWS_AS(cli::parse_weight_spec("{\"kind\":\"nope\"}", 2, "--v"), Error);
}

TEST_CASE("JSON round trips") {
  auto hex = io::polytope_from_json(io::read_json_file(data("hexagon.json")));
  auto again = io::polytope_from_json(io::to_json(hex));
  CHECK(again.facets() == hex.facets());

  const char* text = R"({"kind":"sum","args":[
      {"kind":"poly","terms":[{"exp":[1,2],"coef":"3/2"}]},
      {"kind":"quotient","args":[{"kind":"expaff","normal":["1","-1/2"],"offset":"0"},
                                 {"kind":"affpow","normal":[1,1],"offset":"2","exponent":"-3/2"}]},
      {"kind":"affpow","normal":[1,0],"offset":"1","exponent":0.25},
      {"kind":"scalar","value":"7"}]})";
  WeightExpr e = io::weight_from_json(json::parse(text), 2);
  WeightExpr f = io::weight_from_json(io::to_json(e), 2);
  for (auto x : {std::vector<double>{0.1, 0.2}, std::vector<double>{0.9, 0.4}}) CHECK(e(x) == f(x));
  CHECK(io::to_json(e) == io::to_json(f));
  CHECK(f.has_inexact_exponent());

  auto fib = io::fibration_from_json(json::parse(R"({"factors":[{"p":[1,0],"c":"2","m":1,"scal":4.5}]})"), 2);
  CHECK(fib.factors[0].scal == Rational(9, 2));
  CHECK_THROWS_AS(io::fibration_from_json(json::parse(R"({"factors":[{"p":[0.5,0],"c":"2","m":1,"scal":0}]})"), 2), Error);
}
