#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "bloch/errors.hpp"
#include "bloch/report.hpp"
#include "bloch/sampling.hpp"
#include "check_util.hpp"

namespace bloch {

namespace {

using io::Json;

std::string fmt_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

[[noreturn]] void bad(const std::string& path, const std::string& msg) { throw ParseError(path + ": " + msg); }

double exponent_from_json(const Json& j, const std::string& path) {
  if (j.is_string() && j == "inf") return std::numeric_limits<double>::infinity();
  if (!j.is_number()) bad(path, "exponent must be a number >= 1 or \"inf\"");
  const double p = j.get<double>();
  if (!(p >= 1.0)) bad(path, "exponent must be >= 1");
  return p;
}

std::uint64_t seed_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) bad(path, "seed must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::vector<DiscPoint> points_spec(const Json& j, const std::string& path, std::uint64_t seed) {
  if (j.is_array()) return io::points_from_json(j, path);
  if (!j.is_object()) bad(path, "expected a list of points or a {\"scheme\", \"n\"} object");
  const std::string scheme = j.value("scheme", "pseudo_hyperbolic");
  SampleScheme s;
  if (scheme == "pseudo_hyperbolic") {
    s = SampleScheme::pseudo_hyperbolic;
  } else if (scheme == "polar_grid") {
    s = SampleScheme::polar_grid;
  } else {
    bad(path + ".scheme", "unknown scheme \"" + scheme + "\"");
  }
  if (!j.contains("n") || !j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0) {
    bad(path + ".n", "expected a positive integer");
  }
  const double cap = j.value("cap", kDefaultRadiusCap);
  if (!(cap > 0.0 && cap < 1.0)) bad(path + ".cap", "cap must lie in (0, 1)");
  const std::uint64_t sd = j.contains("seed") ? seed_from_json(j["seed"], path + ".seed") : seed;
  return sample_disc(s, j["n"].get<std::size_t>(), sd, cap);
}

TestFamily family_spec(const Json& j, const std::string& path, const std::vector<DiscPoint>& points,
                       std::uint64_t seed) {
  if (j.is_null() || j == "default") return default_family(points, seed);
  if (!j.is_object()) bad(path, "expected an object or \"default\"");
  if (j.contains("members")) return io::family_from_json(j, path);
  if (j.contains("default")) {
    const Json& d = j["default"];
    const std::uint64_t sd = d.is_object() && d.contains("seed") ? seed_from_json(d["seed"], path + ".default.seed") : seed;
    return default_family(points, sd);
  }
  if (j.contains("generate")) {
    const Json& g = j["generate"];
    const std::string gp = path + ".generate";
    FamilySpec spec;
    if (g.contains("extremal_grid")) {
      const Json& eg = g["extremal_grid"];
      if (eg.is_string() && eg == "points") {
        spec.extremal_grid = points;
      } else {
        spec.extremal_grid = points_spec(eg, gp + ".extremal_grid", seed);
      }
    }
    if (g.contains("phase_convex")) {
      const Json& pc = g["phase_convex"];
      PhaseConvexSpec s;
      s.random_combinations = pc.value("random_combinations", std::size_t{0});
      s.terms = pc.value("terms", std::size_t{3});
      s.seed = pc.contains("seed") ? seed_from_json(pc["seed"], gp + ".phase_convex.seed") : seed;
      spec.phase_convex = s;
    }
    if (g.contains("polynomials")) {
      const Json& pj = g["polynomials"];
      PolynomialSpec s;
      s.degree = pj.value("degree", 2);
      s.count = pj.value("count", std::size_t{1});
      s.seed = pj.contains("seed") ? seed_from_json(pj["seed"], gp + ".polynomials.seed") : seed;
      spec.polynomials = s;
    }
    return make_family(spec);
  }
  bad(path, "expected \"members\", \"default\" or \"generate\"");
}

struct Parsed {
  std::string name = "scenario";
  std::uint64_t seed = 0;
  NormKind norm = NormKind::euclidean;
  std::optional<HoloExpr> f;
  std::vector<DiscPoint> points;
  std::optional<WeightedSample> sample;
  TestFamily family;
  std::vector<double> exponents{1.0, 1.5, 2.0, 4.0};
  std::vector<DiscPoint> check_points;
  double q = 4.0;
  double maurey_p = 2.0;
  int depth = 6;
  int resolution = 256;
  std::optional<Molecule> molecule;
  std::vector<double> molecule_exponents{1.0, 2.0, std::numeric_limits<double>::infinity()};
  std::vector<std::string> checks;
};

const std::vector<std::string> kKnownChecks{"seminorm", "summing",   "pietsch", "duality", "monotonicity",
                                            "infinity", "factorize", "maurey",  "molecule"};

Parsed parse(const Json& s, Tolerances& tol) {
  if (!s.is_object()) bad("scenario", "expected an object");
  Parsed p;
  if (s.contains("name")) {
    if (!s["name"].is_string()) bad("name", "expected a string");
    p.name = s["name"].get<std::string>();
  }
  if (s.contains("seed")) p.seed = seed_from_json(s["seed"], "seed");
  if (s.contains("norm")) p.norm = io::norm_from_json(s["norm"], "norm");
  if (s.contains("tolerances")) {
    if (!s["tolerances"].is_object()) bad("tolerances", "expected an object");
    for (const auto& [k, v] : s["tolerances"].items()) {
      if (!v.is_number()) bad("tolerances." + k, "expected a number");
      try {
        tol.set(k, v.get<double>());
      } catch (const InvalidArgument& e) {
        bad("tolerances." + k, e.what());
      }
    }
  }
  if (s.contains("function")) {
    p.f = io::holo_from_json(s["function"], "function");
    const auto f0 = p.f->value_at(Complex(0.0, 0.0));
    if (vector_norm(f0, NormKind::euclidean) > 1e-12) p.f = simplify(normalize_origin(*p.f));
  }
  if (s.contains("points")) p.points = points_spec(s["points"], "points", p.seed);
  if (s.contains("sample")) {
    p.sample = io::sample_from_json(s["sample"], "sample");
    if (p.points.empty()) p.points = p.sample->points();
  }
  if (p.points.empty() && !s.contains("molecule")) bad("points", "a scenario needs \"points\" or \"sample\"");
  if (!p.points.empty() && !p.sample) p.sample = WeightedSample::uniform(p.points);
  if (!p.points.empty()) p.family = family_spec(s.contains("family") ? s["family"] : Json(), "family", p.points, p.seed);
  if (s.contains("exponents")) {
    if (!s["exponents"].is_array() || s["exponents"].empty()) bad("exponents", "expected a nonempty list");
    p.exponents.clear();
    for (std::size_t i = 0; i < s["exponents"].size(); ++i) {
      p.exponents.push_back(exponent_from_json(s["exponents"][i], "exponents[" + std::to_string(i) + "]"));
    }
  }
  if (s.contains("check_points")) p.check_points = points_spec(s["check_points"], "check_points", p.seed + 1);
  if (s.contains("maurey")) {
    const Json& m = s["maurey"];
    if (!m.is_object()) bad("maurey", "expected an object");
    if (m.contains("p")) p.maurey_p = exponent_from_json(m["p"], "maurey.p");
    if (m.contains("q")) p.q = exponent_from_json(m["q"], "maurey.q");
    if (m.contains("depth")) {
      if (!m["depth"].is_number_integer() || m["depth"].get<int>() < 1) bad("maurey.depth", "expected an integer >= 1");
      p.depth = m["depth"].get<int>();
    }
  }
  if (s.contains("resolution")) {
    if (!s["resolution"].is_number_integer() || s["resolution"].get<int>() < 4) bad("resolution", "expected an integer >= 4");
    p.resolution = s["resolution"].get<int>();
  }
  if (s.contains("molecule")) p.molecule = io::molecule_from_json(s["molecule"], p.norm, "molecule");
  if (s.contains("molecule_exponents")) {
    p.molecule_exponents.clear();
    for (std::size_t i = 0; i < s["molecule_exponents"].size(); ++i) {
      p.molecule_exponents.push_back(
          exponent_from_json(s["molecule_exponents"][i], "molecule_exponents[" + std::to_string(i) + "]"));
    }
  }
  if (s.contains("checks")) {
    if (!s["checks"].is_array()) bad("checks", "expected a list of check names");
    for (std::size_t i = 0; i < s["checks"].size(); ++i) {
      const Json& c = s["checks"][i];
      if (!c.is_string() || std::find(kKnownChecks.begin(), kKnownChecks.end(), c.get<std::string>()) == kKnownChecks.end()) {
        bad("checks[" + std::to_string(i) + "]", "unknown check");
      }
      p.checks.push_back(c.get<std::string>());
    }
  } else {
    if (p.f) p.checks = {"seminorm", "summing", "pietsch", "duality", "monotonicity", "infinity", "maurey"};
    if (p.molecule) p.checks.push_back("molecule");
  }
  const bool needs_f = std::any_of(p.checks.begin(), p.checks.end(), [](const std::string& c) { return c != "molecule"; });
  if (needs_f && !p.f) bad("function", "required by the requested checks");
  if (std::find(p.checks.begin(), p.checks.end(), "molecule") != p.checks.end() && !p.molecule) {
    bad("molecule", "required by the molecule check");
  }
  return p;
}

void guarded(std::vector<Check>& out, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    out.push_back(errored(name, e.kind(), e.what()));
  } catch (const std::exception& e) {
    out.push_back(errored(name, "InternalError", e.what()));
  }
}

void run_checks(const Parsed& s, const Tolerances& tol, std::vector<Check>& out) {
  const std::string base = s.name + "/";
  auto has = [&](const char* c) { return std::find(s.checks.begin(), s.checks.end(), c) != s.checks.end(); };
  std::vector<double> finite;
  for (double p : s.exponents) {
    if (std::isfinite(p)) finite.push_back(p);
  }
  std::sort(finite.begin(), finite.end());

  if (has("seminorm")) {
    guarded(out, base + "seminorm", [&] {
      const auto b = bloch_seminorm_bracket(*s.f, GridSpec{s.resolution, 1.0}, s.norm);
      if (b.has_upper()) {
        out.push_back(measured(base + "seminorm", true, b.upper - b.lower, tol, "denominator", io::to_json(b)));
      } else {
        out.push_back(informational(base + "seminorm", io::to_json(b), "no certified upper bound"));
      }
    });
  }
  if (has("summing")) {
    for (double p : s.exponents) {
      const std::string name = base + "summing/p=" + fmt_p(p);
      guarded(out, name, [&] {
        const auto e = summing_estimate(*s.f, *s.sample, s.family, p, s.norm);
        out.push_back(measured(name, true, e.denominator_closed_form - e.denominator_family, tol, "denominator",
                               io::to_json(e)));
      });
    }
  }
  if (has("pietsch")) {
    for (double p : finite) {
      const std::string name = base + "pietsch/p=" + fmt_p(p);
      guarded(out, name, [&] {
        const auto mu = pietsch_lp(*s.f, s.points, s.family, p, s.norm);
        const auto dom = domination_check(*s.f, s.points, mu, s.norm, tol.get("domination"));
        io::Json w = io::to_json(mu);
        w["domination"] = io::to_json(dom);
        out.push_back(measured(name, true, dom.worst_margin, tol, "domination", w));
        if (!s.check_points.empty()) {
          const auto extra = domination_check(*s.f, s.check_points, mu, s.norm, tol.get("domination"));
          Check c = measured(base + "pietsch_new_points/p=" + fmt_p(p), false, extra.worst_margin, tol, "domination",
                             io::to_json(extra));
          c.message = "violations at unsolved points measure the discretization gap";
          out.push_back(c);
        }
      });
    }
  }
  if (has("duality")) {
    for (double p : finite) {
      const std::string name = base + "duality/p=" + fmt_p(p);
      guarded(out, name, [&] {
        const auto d = lp_duality_check(*s.f, s.points, s.family, p, s.norm, tol.get("duality"));
        out.push_back(measured(name, true, -std::max(d.relative_gap, d.witness_ratio_gap), tol, "duality",
                               io::to_json(d)));
      });
    }
  }
  if (has("monotonicity") && finite.size() >= 2) {
    guarded(out, base + "monotonicity", [&] {
      io::Json consts = io::Json::array();
      double worst = std::numeric_limits<double>::infinity();
      double prev = 0.0;
      for (std::size_t i = 0; i < finite.size(); ++i) {
        const double c = pietsch_lp(*s.f, s.points, s.family, finite[i], s.norm).constant;
        consts.push_back({{"p", finite[i]}, {"constant", c}});
        if (i > 0) worst = std::min(worst, prev - c);
        prev = c;
      }
      out.push_back(measured(base + "monotonicity", true, worst, tol, "monotonicity", {{"constants", consts}}));
    });
  }
  if (has("infinity")) {
    guarded(out, base + "infinity", [&] {
      TestFamily fam = s.family;
      for (const auto& z : s.points) fam.add(extremal(z), 1.0, "sample-point extremal");
      std::vector<SampleEntry> entries;
      double sampled = 0.0;
      for (const auto& z : s.points) {
        entries.push_back({Complex(z.weight(), 0.0), z});
        sampled = std::max(sampled, z.weight() * vector_norm(s.f->derivative_at(z.value()), s.norm));
      }
      const auto e = summing_estimate(*s.f, WeightedSample(entries), fam, std::numeric_limits<double>::infinity(), s.norm);
      io::Json w = io::to_json(e);
      w["sampled_seminorm"] = sampled;
      out.push_back(measured(base + "infinity", true, -std::abs(e.heuristic_ratio - sampled), tol,
                             "infinity_coincidence", w));
    });
  }
  if (has("factorize")) {
    guarded(out, base + "factorize", [&] {
      const auto mu = pietsch_lp(*s.f, s.points, s.family, 2.0, s.norm);
      FactorizeOptions opt;
      opt.norm = s.norm;
      opt.seed = s.seed;
      opt.residual_tol = tol.get("factorization_residual");
      try {
        const auto cert = factorize(*s.f, s.points, mu, opt);
        const double margin = mu.constant * (1.0 + tol.get("factorization_norm")) - cert.operator_norm_estimate;
        Check c = measured(base + "factorize", false, margin, tol, "factorization_norm", io::to_json(cert));
        c.message = "operator norm on the span versus c; not implied by domination at atoms";
        out.push_back(c);
      } catch (const RankDeficiency& e) {
        Check c = measured(base + "factorize", false, -1.0, tol, "factorization_residual");
        c.message = e.what();
        out.push_back(c);
      }
    });
  }
  if (has("maurey")) {
    guarded(out, base + "maurey", [&] {
      const auto r = maurey_extrapolate(*s.f, s.points, s.family, s.maurey_p, s.q, s.depth, s.norm);
      const io::Json w = io::to_json(r);
      out.push_back(measured(base + "maurey/theta", true, -r.theta_consistency, tol, "theta",
                             {{"theta", r.theta}, {"p", r.p}, {"q", r.q}}));
      out.push_back(measured(base + "maurey/holder", true, r.worst_holder_margin, tol, "interpolation",
                             {{"worst_holder_margin", r.worst_holder_margin}}));
      Check stated = measured(base + "maurey/interpolation", false, r.worst_interpolation_margin, tol, "interpolation",
                              {{"worst_interpolation_margin", r.worst_interpolation_margin}});
      stated.message = "norm form ||v||_p <= ||v||_1^theta ||v||_q^(1-theta); not implied by p = theta + (1-theta) q";
      out.push_back(stated);
      Check fin = measured(base + "maurey/final_bound", false, r.worst_final_margin, tol, "interpolation", w);
      fin.message = "||v||_{Lq(mu_0)} <= C ||v||_{L1(mixture)} with C = 2 (2 c_max)^(1/theta)";
      out.push_back(fin);
    });
  }
  if (has("molecule")) {
    for (double p : s.molecule_exponents) {
      const std::string name = base + "molecule/p=" + fmt_p(p);
      guarded(out, name, [&] {
        TestFamily fam = s.points.empty() ? default_family({}, s.seed) : s.family;
        const auto probes = default_probes(*s.molecule, fam, 8, s.seed);
        const auto sw = sandwich(*s.molecule, p, probes);
        out.push_back(measured(name, true, sw.upper - sw.lower, tol, "sandwich", io::to_json(sw, probes)));
      });
    }
  }
}

}  // namespace

Report run_scenario(const io::Json& scenario, const Tolerances& base_tol) {
  Report rep;
  rep.version = tool_version();
  rep.scenario = scenario;
  Tolerances tol = base_tol;
  const auto t0 = std::chrono::steady_clock::now();
  std::string name = "scenario";
  if (scenario.is_object() && scenario.contains("name") && scenario["name"].is_string()) {
    name = scenario["name"].get<std::string>();
  }
  std::optional<Parsed> parsed;
  try {
    parsed = parse(scenario, tol);
  } catch (const Error& e) {
    rep.checks.push_back(errored(name + "/input", e.kind(), e.what()));
  } catch (const std::exception& e) {
    rep.checks.push_back(errored(name + "/input", "ParseError", e.what()));
  }
  if (parsed) {
    rep.seed = parsed->seed;
    run_checks(*parsed, tol, rep.checks);
  }
  sort_checks(rep.checks);
  rep.timing_ms[name] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

io::Json prop1_inclusions_scenario() {
  return io::Json::parse(R"({
    "name": "prop1-inclusions",
    "seed": 0,
    "function": {"kind": "sum", "children": [
      {"kind": "tensor", "x": [[1, 0], [0, 1]], "child": {"kind": "monomial", "k": 2}},
      {"kind": "tensor", "x": [[0.5, 0], [0, 0]], "child": {"kind": "extremal", "a": [0.3, -0.4]}}
    ]},
    "points": {"scheme": "pseudo_hyperbolic", "n": 8, "cap": 0.9},
    "family": {"generate": {"extremal_grid": "points",
                            "phase_convex": {"random_combinations": 6, "terms": 3}}},
    "exponents": [1, 1.5, 2, 3, 4, "inf"],
    "checks": ["summing", "pietsch", "duality", "monotonicity", "infinity"]
  })");
}

}  // namespace bloch
