// bloch: command-line front end. Every command prints one JSON document.
// Exit status: 0 pass, 1 certified-check failure, 2 input error.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bloch/errors.hpp"
#include "bloch/json_io.hpp"
#include "bloch/report.hpp"

using namespace bloch;
using io::Json;

namespace {

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double p = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !(p >= 1.0)) throw InvalidArgument("exponent \"" + s + "\" must be a number >= 1 or inf");
  return p;
}

NormKind parse_norm(const std::string& s) {
  if (s == "euclidean") return NormKind::euclidean;
  if (s == "sup") return NormKind::sup;
  throw InvalidArgument("norm must be euclidean or sup");
}

HoloExpr load_function(const std::string& src) {
  HoloExpr f = io::holo_from_json(io::read_inline_or_file(src), "function");
  return f;
}

std::vector<DiscPoint> load_points(const std::string& src) {
  return io::points_from_json(io::read_inline_or_file(src), "points");
}

TestFamily load_family(const std::string& src, const std::vector<DiscPoint>& points, std::uint64_t seed) {
  if (src.empty()) return default_family(points, seed);
  return io::family_from_json(io::read_inline_or_file(src), "family");
}

Json envelope(std::uint64_t seed) { return {{"version", tool_version()}, {"seed", seed}}; }

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-summing Bloch mappings on the unit disc"};
  app.require_subcommand(1);
  app.fallthrough();

  std::vector<std::string> tol_overrides;
  std::uint64_t seed = 0;
  std::string norm_name = "euclidean";
  app.add_option("--tol", tol_overrides, "Tolerance override name=value (repeatable)");
  app.add_option("--seed", seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--norm", norm_name, "Norm on C^d: euclidean or sup")->capture_default_str();

  std::string func, points, sample, family, mol, check_points, scenario;
  std::vector<std::string> ps{"2"};
  std::string q = "4";
  int depth = 6;
  int resolution = 512;
  double cap = 1.0;
  bool do_factorize = false;
  bool bounds = false;
  bool csv = false;
  bool json_flag = false;
  bool no_timing = false;
  bool corrupt = false;
  std::size_t functionals = 8;

  auto* eval = app.add_subcommand("eval", "Values and derivatives of a function at points");
  eval->add_option("--func", func, "HoloExpr JSON file or inline document")->required();
  eval->add_option("--points", points, "Point list JSON")->required();

  auto* semi = app.add_subcommand("seminorm", "Certified bracket on the Bloch seminorm");
  semi->add_option("--func", func)->required();
  semi->add_option("--resolution", resolution)->capture_default_str();
  semi->add_option("--cap", cap, "Largest grid radius (1 means the whole disc)")->capture_default_str();

  auto* summ = app.add_subcommand("summing", "Summing-ratio estimate for a weighted sample");
  summ->add_option("--func", func)->required();
  summ->add_option("--sample", sample)->required();
  summ->add_option("--family", family, "Family JSON; default family when omitted");
  summ->add_option("--p", ps, "Exponent(s), numbers >= 1 or inf")->capture_default_str();
  summ->add_flag("--csv", csv, "One CSV row per exponent instead of JSON");

  auto* piet = app.add_subcommand("pietsch", "Pietsch domination LP");
  piet->add_option("--func", func)->required();
  piet->add_option("--points", points)->required();
  piet->add_option("--family", family);
  piet->add_option("--p", ps)->capture_default_str();
  piet->add_flag("--factorize", do_factorize, "Also build the factorization certificate");
  piet->add_option("--check-points", check_points, "Extra points for the domination check");

  auto* maur = app.add_subcommand("maurey", "Maurey extrapolation pipeline");
  maur->add_option("--func", func)->required();
  maur->add_option("--points", points)->required();
  maur->add_option("--family", family);
  maur->add_option("--p", ps)->capture_default_str();
  maur->add_option("--q", q)->capture_default_str();
  maur->add_option("--depth", depth)->capture_default_str();

  auto* mole = app.add_subcommand("molecule", "Upper and lower bounds on molecule norms");
  mole->add_option("--mol", mol)->required();
  mole->add_option("--p", ps)->capture_default_str();
  mole->add_option("--family", family, "Probe family; default family when omitted");
  mole->add_option("--functionals", functionals, "Random unit functionals per family member")->capture_default_str();
  mole->add_flag("--bounds", bounds, "Include the dual lower bound (upper only otherwise)");

  auto* pair = app.add_subcommand("pair", "Pairing of a molecule with a function");
  pair->add_option("--mol", mol)->required();
  pair->add_option("--func", func)->required();

  auto* ver = app.add_subcommand("verify", "Run the invariant suite or a scenario file");
  ver->add_option("--scenario", scenario, "Scenario JSON; the full suite when omitted");
  ver->add_flag("--json", json_flag, "Emit the report as JSON (the default)");
  ver->add_flag("--no-timing", no_timing, "Omit timing from the report");
  ver->add_flag("--inject-corrupt-family", corrupt, "Inject a family member with certificate 1.5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Tolerances tol;
    for (const auto& t : tol_overrides) tol.set_from_string(t);
    const NormKind norm = parse_norm(norm_name);

    if (*eval) {
      const HoloExpr f = load_function(func);
      Json rows = Json::array();
      for (const auto& z : load_points(points)) {
        Json vals = Json::array();
        Json ders = Json::array();
        for (const auto& c : f.value_at(z.value())) vals.push_back(io::to_json(c));
        for (const auto& c : f.derivative_at(z.value())) ders.push_back(io::to_json(c));
        rows.push_back({{"z", io::to_json(z)},
                        {"value", vals},
                        {"derivative", ders},
                        {"weighted_derivative_norm", z.weight() * vector_norm(f.derivative_at(z.value()), norm)}});
      }
      Json out = envelope(seed);
      out["evaluations"] = rows;
      emit(out);
      return 0;
    }
    if (*semi) {
      const auto b = bloch_seminorm_bracket(load_function(func), GridSpec{resolution, cap}, norm);
      Json out = envelope(seed);
      out["bracket"] = io::to_json(b);
      emit(out);
      return 0;
    }
    if (*summ) {
      const HoloExpr f = load_function(func);
      const WeightedSample s = io::sample_from_json(io::read_inline_or_file(sample), "sample");
      const TestFamily fam = load_family(family, s.points(), seed);
      if (csv) {
        std::cout << "p,numerator,denominator_family,denominator_closed_form,certified_lower,heuristic_ratio\n";
        std::cout.precision(17);
        for (const auto& pt : ps) {
          const auto e = summing_estimate(f, s, fam, parse_exponent(pt), norm);
          std::cout << pt << "," << e.numerator << "," << e.denominator_family << "," << e.denominator_closed_form
                    << "," << e.certified_lower << "," << e.heuristic_ratio << "\n";
        }
        return 0;
      }
      Json ests = Json::array();
      for (const auto& pt : ps) ests.push_back(io::to_json(summing_estimate(f, s, fam, parse_exponent(pt), norm)));
      Json out = envelope(seed);
      out["estimates"] = ests;
      emit(out);
      return 0;
    }
    if (*piet) {
      const HoloExpr f = load_function(func);
      const auto pts = load_points(points);
      const TestFamily fam = load_family(family, pts, seed);
      Json results = Json::array();
      bool failed = false;
      for (const auto& pt : ps) {
        const double p = parse_exponent(pt);
        const auto mu = pietsch_lp(f, pts, fam, p, norm);
        Json r = io::to_json(mu);
        const auto dom = domination_check(f, pts, mu, norm, tol.get("domination"));
        r["domination"] = io::to_json(dom);
        failed = failed || dom.violations > 0;
        if (!check_points.empty()) {
          r["check_points"] = io::to_json(domination_check(f, load_points(check_points), mu, norm, tol.get("domination")));
        }
        if (do_factorize) {
          FactorizeOptions opt;
          opt.norm = norm;
          opt.seed = seed;
          opt.residual_tol = tol.get("factorization_residual");
          try {
            r["factorization"] = io::to_json(factorize(f, pts, mu, opt));
          } catch (const RankDeficiency& e) {
            r["factorization"] = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
          }
        }
        results.push_back(r);
      }
      Json out = envelope(seed);
      out["measures"] = results;
      emit(out);
      return failed ? 1 : 0;
    }
    if (*maur) {
      const HoloExpr f = load_function(func);
      const auto pts = load_points(points);
      const TestFamily fam = load_family(family, pts, seed);
      const auto r = maurey_extrapolate(f, pts, fam, parse_exponent(ps.front()), parse_exponent(q), depth, norm);
      Json out = envelope(seed);
      out["maurey"] = io::to_json(r);
      emit(out);
      return 0;
    }
    if (*mole) {
      const Molecule m = io::molecule_from_json(io::read_inline_or_file(mol), norm, "molecule");
      Json results = Json::array();
      bool failed = false;
      std::vector<Probe> probes;
      if (bounds) {
        std::vector<DiscPoint> zs;
        for (const auto& a : m.atoms()) zs.push_back(a.z);
        probes = default_probes(m, load_family(family, zs, seed), functionals, seed);
      }
      for (const auto& pt : ps) {
        const double p = parse_exponent(pt);
        Json r;
        if (bounds) {
          const auto sw = sandwich(m, p, probes);
          r = io::to_json(sw, probes);
          failed = failed || sw.lower > sw.upper + tol.get("sandwich");
        } else {
          const auto rep = best_representation(m, p);
          r = {{"upper", io::real_to_json(representation_value(rep.molecule, p))},
               {"witnesses", {{"upper_representation", io::to_json(rep.molecule)}, {"moves", rep.moves}}}};
        }
        r["p"] = io::real_to_json(p);
        r["projective_upper"] = io::real_to_json(projective_upper(m));
        results.push_back(r);
      }
      Json out = envelope(seed);
      out["norm"] = io::norm_name(norm);
      out["bounds"] = results;
      emit(out);
      return failed ? 1 : 0;
    }
    if (*pair) {
      const Molecule m = io::molecule_from_json(io::read_inline_or_file(mol), norm, "molecule");
      Json out = envelope(seed);
      out["pairing"] = io::to_json(pairing(m, load_function(func)));
      emit(out);
      return 0;
    }
    if (*ver) {
      Report r;
      if (!scenario.empty()) {
        Json doc;
        try {
          doc = io::read_inline_or_file(scenario);
        } catch (const Error& e) {
          r.version = tool_version();
          r.checks.push_back({"input", CheckStatus::error, true, 0.0, 0.0, "", Json::object(), e.kind(), e.what()});
        }
        if (r.checks.empty()) r = run_scenario(doc, tol);
      } else {
        r = verify_all(VerifyOptions{seed, max_threads_from_env(), corrupt}, tol);
      }
      emit(r.to_json(!no_timing));
      return r.exit_code();
    }
  } catch (const CertificationFailure& e) {
    emit({{"version", tool_version()}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}});
    std::cerr << "bloch: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    emit({{"version", tool_version()}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}});
    std::cerr << "bloch: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
