#include "wkstab/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "wkstab/error.hpp"
#include "wkstab/fibration.hpp"
#include "wkstab/futaki.hpp"
#include "wkstab/io.hpp"
#include "wkstab/kernels.hpp"
#include "wkstab/quadrature.hpp"
#include "wkstab/stability.hpp"
#include "wkstab/weights.hpp"

namespace wkstab::cli {

using io::json;

namespace {

constexpr const char* kSchema = "wkstab/1";

struct Job {
  std::string command;
  std::string polytope;
  std::string v = "one";
  std::string w;
  std::string w0 = "one";
  std::string ell;
  std::string f;
  std::string fibration;
  std::string x0 = "barycenter";
  std::string family = "soliton";
  std::string a = "1";
  std::string fano;
  double tol = 1e-10;
  int grid_depth = 4;
  int slope_bound = 3;
  int offsets = 16;
  int degree = 4;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int threads = 0;
  bool stability = false;
  std::string out;

  json to_json() const {
    json j = {{"command", command}, {"tol", tol}, {"grid_depth", grid_depth}, {"seed", seed}};
    auto opt = [&](const char* key, const std::string& value) {
      if (!value.empty()) j[key] = value;
    };
    opt("polytope", polytope);
    opt("out", out);
    if (command != "validate") {
      opt("v", v);
      opt("w", w);
    }
    if (command == "extremal") opt("w0", w0);
    opt("ell", ell);
    opt("f", f);
    opt("fibration", fibration);
    if (command == "check-stability" || command == "search-destabilizer" || command == "fibration") {
      j["x0"] = x0;
      opt("fano", fano);
    }
    if (command == "search-destabilizer" || (command == "fibration" && stability)) {
      j["slope_bound"] = slope_bound;
      j["offsets"] = offsets;
    }
    if (command == "fibration") j["stability"] = stability;
    if (command == "integrate" && samples > 0) j["samples"] = samples;
    if (command == "weights") {
      j["family"] = family;
      if (family == "cone") j["a"] = a;
      if (family == "bernstein") j["degree"] = degree;
    }
    return j;
  }
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

RVec parse_csv(const std::string& s, std::size_t expected, const std::string& flag) {
  auto parts = split_csv(s);
  if (parts.size() != expected)
    throw Error("input", flag + " expects " + std::to_string(expected) + " comma-separated values", flag);
  RVec out;
  for (const auto& p : parts) {
    try {
      out.push_back(parse_rational(p));
    } catch (const Error& e) {
      throw Error("input", e.what(), flag);
    }
  }
  return out;
}

/// c,u1,..,un in the basis {1, x_1, .., x_n}.
AffineFunctional parse_affine_csv(const std::string& s, int n, const std::string& flag) {
  RVec v = parse_csv(s, n + 1, flag);
  return AffineFunctional(RVec(v.begin() + 1, v.end()), v[0]);
}

std::optional<RVec> parse_x0(const std::string& s, int n) {
  if (s == "barycenter") return std::nullopt;
  return parse_csv(s, n, "--x0");
}

void write_report(const Job& job, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (job.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(job.out);
  if (!file) throw Error("io", "cannot write '" + job.out + "'", "--out");
  file << text;
}

json envelope(const Job& job) { return {{"schema", kSchema}, {"job", job.to_json()}}; }

}  // namespace

WeightExpr parse_weight_spec(const std::string& spec, int n, const std::string& flag) {
  auto wrap = [&](auto&& f) -> WeightExpr {
    try {
      return f();
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), e.location().empty() ? flag : flag + ": " + e.location());
    }
  };
  if (spec == "one") return WeightExpr::scalar(1);
  if (spec == "zero") return WeightExpr::scalar(0);
  if (spec.rfind("const:", 0) == 0)
    return wrap([&] { return WeightExpr::scalar(parse_csv(spec.substr(6), 1, flag)[0]); });
  if (spec.rfind("expaff:", 0) == 0)
    return wrap([&] { return WeightExpr::expaff(AffineFunctional(parse_csv(spec.substr(7), n, flag), 0)); });
  if (spec.rfind("affpow:", 0) == 0) {
    return wrap([&] {
      const std::string body = spec.substr(7);
      const auto colon = body.find(':');
      if (colon == std::string::npos) throw Error("input", "affpow shorthand is affpow:M:c,u1,..,un", flag);
      Rational m = parse_csv(body.substr(0, colon), 1, flag)[0];
      return WeightExpr::affpow(parse_affine_csv(body.substr(colon + 1), n, flag), m);
    });
  }
  if (spec.rfind("file:", 0) == 0)
    return wrap([&] { return io::weight_from_json(io::read_json_file(spec.substr(5)), n, "weight"); });
  if (!spec.empty() && spec.front() == '{')
    return wrap([&] { return io::weight_from_json(io::parse_json(spec, flag), n, "weight"); });
  throw Error("input", "unrecognised weight '" + spec + "'", flag);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Job job;
  CLI::App app{"Weighted K-stability of labeled Delzant polytopes", "wkstab"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* s) {
    s->add_option("--polytope", job.polytope, "polytope JSON file")->required();
    s->add_option("--tol", job.tol, "quadrature tolerance")->capture_default_str();
    s->add_option("--seed", job.seed, "random seed")->capture_default_str();
    s->add_option("--threads", job.threads, "worker threads (0: OpenMP default)");
    s->add_option("--out", job.out, "write the report here instead of stdout");
  };
  auto vw = [&](CLI::App* s, bool need_w) {
    s->add_option("--v", job.v, "weight v")->capture_default_str();
    auto* w = s->add_option("--w", job.w, "weight w");
    if (need_w) w->required();
  };
  auto grid = [&](CLI::App* s) {
    s->add_option("--grid-depth", job.grid_depth, "barycentric refinement depth")->capture_default_str();
  };
  auto point = [&](CLI::App* s) {
    s->add_option("--x0", job.x0, "normalisation point: CSV or 'barycenter'")->capture_default_str();
  };
  auto search = [&](CLI::App* s) {
    s->add_option("--slope-bound", job.slope_bound, "max |u_i| of crease normals")->capture_default_str();
    s->add_option("--offsets", job.offsets, "crease offsets per normal")->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "check the Delzant condition");
  common(validate);

  auto* integrate = app.add_subcommand("integrate", "volume, boundary measure and weight integrals");
  common(integrate);
  integrate->add_option("--w", job.w, "weight to integrate");
  integrate->add_option("--samples", job.samples, "Monte Carlo samples for the weight integral");

  auto* futaki = app.add_subcommand("futaki", "Futaki invariant of an affine or PL test function");
  common(futaki);
  vw(futaki, true);
  futaki->add_option("--ell", job.ell, "affine test function c,u1,..,un");
  futaki->add_option("--f", job.f, "PL convex test function JSON file");

  auto* extremal = app.add_subcommand("extremal", "extremal affine function");
  common(extremal);
  extremal->add_option("--v", job.v, "weight v")->capture_default_str();
  extremal->add_option("--w0", job.w0, "weight w0")->capture_default_str();
  grid(extremal);

  auto* normalize = app.add_subcommand("normalize", "shift w so that F(1) = 0");
  common(normalize);
  vw(normalize, true);

  auto* check = app.add_subcommand("check-stability", "cone-wise sufficient condition");
  common(check);
  vw(check, true);
  grid(check);
  point(check);
  check->add_option("--fano", job.fano, "scan all of P with a single scale t instead of cones");

  auto* destab = app.add_subcommand("search-destabilizer", "scan one-crease PL test functions");
  common(destab);
  vw(destab, true);
  point(destab);
  search(destab);

  auto* fib = app.add_subcommand("fibration", "weights of a semisimple principal fibration");
  common(fib);
  vw(fib, true);
  fib->add_option("--fibration", job.fibration, "fibration JSON file")->required();
  grid(fib);
  point(fib);
  search(fib);
  fib->add_flag("--stability", job.stability, "also run the stability checks on the transformed pair");

  auto* weights = app.add_subcommand("weights", "construct weight families");
  common(weights);
  weights->add_option("--family", job.family, "soliton | tilde | cone | bernstein")
      ->check(CLI::IsMember({"soliton", "tilde", "cone", "bernstein"}))
      ->capture_default_str();
  weights->add_option("--v", job.v, "base weight v")->capture_default_str();
  weights->add_option("--ell", job.ell, "cone weights: affine function c,u1,..,un");
  weights->add_option("--a", job.a, "cone weights: coefficient a")->capture_default_str();
  weights->add_option("--degree", job.degree, "Bernstein degree per coordinate")->capture_default_str();
  grid(weights);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);

  auto fail = [&](const std::string& code, const std::string& message, const std::string& location) {
    json report = {{"schema", kSchema}, {"error", io::error_json(code, message, location)}};
    if (!job.command.empty()) report["job"] = job.to_json();
    out << report.dump(2) << "\n";
    err << "error: " << code << ": " << message << (location.empty() ? "" : " (" + location + ")") << "\n";
    return 1;
  };

  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail("input", e.what(), "");
  }

  try {
    job.command = app.get_subcommands().front()->get_name();
    if (!(job.tol > 0)) throw Error("input", "--tol must be positive", "--tol");
    if (job.grid_depth < 0 || job.grid_depth > 12) throw Error("input", "--grid-depth must be in [0, 12]", "--grid-depth");
    if (job.slope_bound < 1) throw Error("input", "--slope-bound must be >= 1", "--slope-bound");
    if (job.offsets < 1) throw Error("input", "--offsets must be >= 1", "--offsets");
    if (job.threads < 0) throw Error("input", "--threads must be >= 0", "--threads");
    if (job.threads > 0) set_threads(job.threads);

    const LabeledPolytope p = io::polytope_from_json(io::read_json_file(job.polytope));
    const int n = p.dim();
    QuadratureOptions quad;
    quad.tol = job.tol;
    json report = envelope(job);
    json& result = report["result"];
    int code = 0;

    const std::string& cmd = job.command;
    if (cmd == "validate") {
      DelzantReport d = validate_delzant(p);
      json vertices = json::array();
      for (const auto& v : p.vertices()) vertices.push_back(io::to_json(v));
      result = {{"delzant", io::to_json(d)},
                {"polytope", io::to_json(p)},
                {"vertices", vertices},
                {"volume", io::to_json(p.volume())},
                {"barycenter", io::to_json(p.barycenter())}};
      if (!d.ok) code = 2;
    } else if (cmd == "integrate") {
      result["volume"] = io::to_json(p.volume());
      result["boundary_measure"] = io::to_json(integrate_poly_boundary(p, MultiPoly::constant(n, 1)));
      if (!job.w.empty()) {
        WeightExpr e = parse_weight_spec(job.w, n, "--w");
        result["interior"] = io::to_json(integrate_weight(p, e, quad));
        result["boundary"] = io::to_json(integrate_weight_boundary(p, e, quad));
        if (job.samples > 0) {
          MonteCarloResult mc = monte_carlo(p, e, job.samples, job.seed);
          result["monte_carlo"] = {{"mean", mc.mean}, {"stderr", mc.stderr_}, {"samples", mc.samples}};
        }
      }
    } else if (cmd == "futaki") {
      WeightExpr v = parse_weight_spec(job.v, n, "--v");
      WeightExpr w = parse_weight_spec(job.w, n, "--w");
      if (job.ell.empty() == job.f.empty()) throw Error("input", "give exactly one of --ell and --f", "--ell");
      if (!job.ell.empty()) {
        AffineFunctional ell = parse_affine_csv(job.ell, n, "--ell");
        result = io::to_json(futaki_affine(p, v, w, ell, quad));
        result["test_function"] = io::to_json(PLConvexFunction::affine(ell));
      } else {
        PLConvexFunction f = io::pl_from_json(io::read_json_file(job.f), n);
        result = io::to_json(futaki_pl(p, v, w, f, quad));
        result["test_function"] = io::to_json(f);
      }
    } else if (cmd == "extremal") {
      WeightExpr v = parse_weight_spec(job.v, n, "--v");
      WeightExpr w0 = parse_weight_spec(job.w0, n, "--w0");
      result = io::to_json(extremal_affine(p, v, w0, quad, job.grid_depth));
    } else if (cmd == "normalize") {
      WeightExpr v = parse_weight_spec(job.v, n, "--v");
      WeightExpr w = parse_weight_spec(job.w, n, "--w");
      FutakiReport before = normalization_residual(p, v, w, quad);
      WeightExpr shifted = normalize_w(p, v, w, quad);
      FutakiReport after = normalization_residual(p, v, shifted, quad);
      result = {{"w", io::to_json(shifted)},
                {"residual_before", io::to_json(before)},
                {"residual_after", io::to_json(after)}};
    } else if (cmd == "check-stability") {
      WeightExpr v = parse_weight_spec(job.v, n, "--v");
      WeightExpr w = parse_weight_spec(job.w, n, "--w");
      auto x0 = parse_x0(job.x0, n);
      StabilityReport r = job.fano.empty()
                              ? sufficient_condition(p, v, w, x0, job.grid_depth)
                              : fano_condition(p, v, w, x0, parse_csv(job.fano, 1, "--fano")[0], job.grid_depth);
      result = io::to_json(r);
      result["v_positive"] = io::to_json(is_positive_on(v, p, job.grid_depth));
      result["v_log_concave"] = io::to_json(is_log_concave_on(v, p, job.grid_depth));
      if (r.verdict != StabilityReport::Verdict::holds) code = 2;
    } else if (cmd == "search-destabilizer") {
      WeightExpr v = parse_weight_spec(job.v, n, "--v");
      WeightExpr w = parse_weight_spec(job.w, n, "--w");
      SearchOptions opts;
      opts.slope_bound = job.slope_bound;
      opts.offsets = job.offsets;
      opts.quad = quad;
      DestabilizerReport r = destabilizer_search(p, v, w, parse_x0(job.x0, n), opts);
      result = io::to_json(r);
      if (!r.all_above_threshold) code = 2;
    } else if (cmd == "fibration") {
      WeightExpr v = parse_weight_spec(job.v, n, "--v");
      WeightExpr w = parse_weight_spec(job.w, n, "--w");
      FibrationData data = io::fibration_from_json(io::read_json_file(job.fibration), n);
      json factors = json::array();
      for (const auto& f : check_positivity(p, data)) factors.push_back(io::to_json(f));
      result["factor_positivity"] = factors;
      result["fibration"] = io::to_json(data);
      if (job.stability) {
        SearchOptions opts;
        opts.slope_bound = job.slope_bound;
        opts.offsets = job.offsets;
        opts.quad = quad;
        FiberedStability fs = fibered_stability(p, data, v, w, parse_x0(job.x0, n), job.grid_depth, opts);
        result["transformed"] = io::to_json(fs.transformed);
        result["stability"] = io::to_json(fs.stability);
        result["search"] = io::to_json(fs.search);
        if (fs.stability.verdict != StabilityReport::Verdict::holds || !fs.search.all_above_threshold) code = 2;
      } else {
        result["transformed"] = io::to_json(fibration_weights(p, data, v, w, job.grid_depth));
      }
    } else if (cmd == "weights") {
      WeightPair pair;
      if (job.family == "cone") {
        if (job.ell.empty()) throw Error("input", "cone weights need --ell", "--ell");
        Rational a = parse_csv(job.a, 1, "--a")[0];
        pair = cone_weights(parse_affine_csv(job.ell, n, "--ell"), a, p);
      } else {
        WeightExpr v = parse_weight_spec(job.v, n, "--v");
        pair.v = v;
        if (job.family == "soliton") {
          pair.w = soliton_w(v, n);
        } else if (job.family == "tilde") {
          pair.w = tilde_v(v, n);
          result["note"] = "w holds n + <grad v, x> / v";
        } else {
          if (job.degree < 0) throw Error("input", "--degree must be >= 0", "--degree");
          MultiPoly b = bernstein_approx([&](std::span<const double> x) { return v(x); },
                                         bounding_box(p.polytope()), job.degree);
          pair.w = WeightExpr::poly(b);
          result["note"] = "w holds the Bernstein approximation of v";
          result["sup_error"] = sup_error_on_grid(v, pair.w, p, job.grid_depth);
        }
      }
      pair.v_positive = is_positive_on(pair.v, p, job.grid_depth);
      if (pair.v_positive->positive()) pair.v_log_concave = is_log_concave_on(pair.v, p, job.grid_depth);
      result["pair"] = io::to_json(pair);
    }
    write_report(job, report, out);
    return code;
  } catch (const Error& e) {
    return fail(e.code(), e.what(), e.location());
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), "");
  }
}

}  // namespace wkstab::cli
