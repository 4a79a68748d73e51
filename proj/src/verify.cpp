#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "bloch/errors.hpp"
#include "bloch/instances.hpp"
#include "bloch/report.hpp"
#include "bloch/sampling.hpp"
#include "check_util.hpp"

namespace bloch {

namespace {

using io::Json;
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

struct Task {
  std::string name;
  std::function<std::vector<Check>()> run;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) { return seed * 1000003ULL + salt; }

std::vector<Check> disc_checks(std::uint64_t seed, const Tolerances& tol) {
  double worst = 0.0;
  const auto zs = sample_disc(SampleScheme::polar_grid, 16, 0, 0.9);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const MobiusMap phi = random_automorphism(mix(seed, 100 + i));
    const MobiusMap inv = mobius_inverse(phi);
    const MobiusMap id = mobius_compose(phi, inv);
    for (const auto& z : zs) {
      worst = std::max(worst, std::abs(mobius_apply(phi, mobius_apply(inv, z)).value() - z.value()));
      worst = std::max(worst, std::abs(id.apply_raw(z.value()) - z.value()));
      const Complex chain = mobius_derivative(phi, mobius_apply(inv, z)) * mobius_derivative(inv, z);
      worst = std::max(worst, std::abs(chain - Complex(1.0, 0.0)));
    }
  }
  return {measured("disc.mobius_group", true, -worst, tol, "mobius_group", {{"automorphisms", 20}, {"max_error", worst}})};
}

std::vector<Check> derivative_checks(std::uint64_t seed, const Tolerances& tol) {
  double worst = 0.0;
  const double h = 1e-5;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const HoloExpr f = random_vector_function(3, mix(seed, 200 + i));
    const HoloExpr g = compose_mobius(f, random_automorphism(mix(seed, 250 + i), 0.5));
    for (const auto& z : sample_disc(SampleScheme::pseudo_hyperbolic, 10, mix(seed, 300 + i), 0.8)) {
      for (const HoloExpr* e : {&f, &g}) {
        const auto exact = e->derivative_at(z.value());
        const auto fp = e->value_at(z.value() + h);
        const auto fm = e->value_at(z.value() - h);
        for (std::size_t j = 0; j < exact.size(); ++j) {
          worst = std::max(worst, rel_err((fp[j] - fm[j]) / (2.0 * h), exact[j]));
        }
      }
    }
  }
  return {measured("holo.derivative_fd", true, -worst, tol, "derivative_fd", {{"max_relative_error", worst}})};
}

std::vector<Check> extremal_checks(std::uint64_t, const Tolerances& tol) {
  const auto as = sample_disc(SampleScheme::polar_grid, 20, 0, 0.95);
  double identity = 0.0;
  double contains = kInf;
  double width = 0.0;
  for (const auto& a : as) {
    const HoloExpr f = extremal(a);
    identity = std::max(identity, std::abs(a.weight() * f.scalar_derivative_at(a.value()) - Complex(1.0, 0.0)));
    const auto b = bloch_seminorm_bracket(f);
    contains = std::min({contains, 1.0 - b.lower, b.upper - 1.0});
    width = std::max(width, b.width());
  }
  const double mono = monomial_seminorm(2);
  const auto b2 = bloch_seminorm_bracket(HoloExpr::monomial(2), GridSpec{256, 1.0});
  const double oracle = 4.0 * std::sqrt(3.0) / 9.0;
  return {
      measured("norms.extremal_identity", true, -identity, tol, "extremal_identity", {{"points", as.size()}}),
      measured("norms.extremal_bracket_contains_one", true, contains, tol, "denominator"),
      measured("norms.extremal_bracket_width", true, -width, tol, "bracket_width", {{"max_width", width}}),
      measured("norms.monomial_seminorm", true,
               std::min({oracle - b2.lower, b2.upper - oracle, -std::abs(mono - oracle)}), tol, "denominator",
               {{"bracket", io::to_json(b2)}, {"closed_form", mono}}),
  };
}

std::vector<Check> family_checks(std::uint64_t seed, bool corrupt, const Tolerances& tol) {
  const auto pts = sample_disc(SampleScheme::pseudo_hyperbolic, 16, mix(seed, 400), 0.9);
  TestFamily fam = default_family(pts, seed);
  if (corrupt) {
    auto members = fam.members();
    members.push_back({extremal(DiscPoint(0.25, 0.25)), 1.5, "injected corrupted certificate"});
    fam = TestFamily::unchecked(std::move(members));
  }
  const auto grid = sample_disc(SampleScheme::polar_grid, 400, 0, 0.99);
  const auto v = validate_family(fam, grid, tol.get("family"));
  Json w = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(v.size(), 5); ++i) {
    w.push_back({{"member", v[i].member},
                 {"provenance", fam[v[i].member].provenance},
                 {"certificate", v[i].certificate},
                 {"weighted_derivative", v[i].weighted_derivative}});
  }
  Check c = measured("family.certificates", true, -static_cast<double>(v.size()), tol, "family",
                     {{"members", fam.size()}, {"violations", w}});
  if (!v.empty()) c.message = "CertificationFailure: " + std::to_string(v.size()) + " certificate violations";
  return {c};
}

std::vector<Check> lp_checks(std::uint64_t seed, const Tolerances& tol) {
  const std::vector<double> ps{1.0, 1.5, 2.0, 4.0};
  double gap = 0.0;
  double mono = kInf;
  double dom = kInf;
  double worst_factor = kInf;
  std::size_t rank_failures = 0;
  std::size_t norm_failures = 0;
  Json gap_witness;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto inst = random_summing_instance(mix(seed, 500 + i));
    double prev = kInf;
    for (double p : ps) {
      const auto d = lp_duality_check(inst.f, inst.points, inst.family, p, NormKind::euclidean, tol.get("duality"));
      const double g = std::max(d.relative_gap, d.witness_ratio_gap);
      if (g > gap) {
        gap = g;
        gap_witness = {{"instance", i}, {"p", p}, {"relative_gap", d.relative_gap}, {"witness_gap", d.witness_ratio_gap}};
      }
      const auto mu = pietsch_lp(inst.f, inst.points, inst.family, p);
      mono = std::min(mono, prev - mu.constant);
      prev = mu.constant;
      dom = std::min(dom, domination_check(inst.f, inst.points, mu).worst_margin);
      if (p == 2.0) {
        FactorizeOptions opt;
        opt.seed = seed;
        opt.residual_tol = tol.get("factorization_residual");
        try {
          const auto cert = factorize(inst.f, inst.points, mu, opt);
          const double m = mu.constant * (1.0 + tol.get("factorization_norm")) - cert.operator_norm_estimate;
          worst_factor = std::min(worst_factor, m);
          if (m < 0.0) ++norm_failures;
        } catch (const RankDeficiency&) {
          ++rank_failures;
        }
      }
    }
  }
  Check fac = measured("summing.factorization", false, rank_failures > 0 ? -kInf : worst_factor, tol,
                       "factorization_norm",
                       {{"instances", 50}, {"rank_deficient", rank_failures}, {"norm_above_c", norm_failures},
                        {"worst_norm_margin", io::real_to_json(worst_factor)}});
  fac.message = "||T|| <= c on the span is not implied by domination at single atoms";
  if (mono == kInf) mono = 0.0;
  return {
      measured("summing.lp_duality", true, -gap, tol, "duality", {{"instances", 50}, {"worst", gap_witness}}),
      measured("summing.monotonicity", true, mono, tol, "monotonicity", {{"instances", 50}}),
      measured("summing.domination_solved_points", true, dom, tol, "domination"),
      fac,
  };
}

std::vector<Check> new_point_checks(std::uint64_t seed, const Tolerances& tol) {
  double worst = kInf;
  std::size_t violations = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto inst = random_summing_instance(mix(seed, 600 + i));
    const auto mu = pietsch_lp(inst.f, inst.points, inst.family, 2.0);
    const auto extra = sample_disc(SampleScheme::pseudo_hyperbolic, 20, mix(seed, 650 + i), 0.9);
    const auto rep = domination_check(inst.f, extra, mu);
    worst = std::min(worst, rep.worst_margin);
    violations += rep.violations;
  }
  Check c = measured("summing.domination_new_points", false, worst, tol, "domination",
                     {{"violations", violations}, {"points", 200}});
  c.message = "violations away from the solved points quantify the discretization gap";
  return {c};
}

std::vector<Check> infinity_checks(std::uint64_t seed, const Tolerances& tol) {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const HoloExpr f = random_vector_function(2, mix(seed, 700 + i));
    const auto pts = sample_disc(SampleScheme::pseudo_hyperbolic, 8, mix(seed, 750 + i), 0.9);
    TestFamily fam = make_family(FamilySpec{pts, std::nullopt, std::nullopt});
    std::vector<SampleEntry> e;
    double sampled = 0.0;
    for (const auto& z : pts) {
      e.push_back({Complex(z.weight(), 0.0), z});
      sampled = std::max(sampled, z.weight() * vector_norm(f.derivative_at(z.value()), NormKind::euclidean));
    }
    const auto est = summing_estimate(f, WeightedSample(e), fam, kInf);
    worst = std::max(worst, std::abs(est.heuristic_ratio - sampled));
  }
  return {measured("summing.infinity_coincidence", true, -worst, tol, "infinity_coincidence", {{"functions", 20}})};
}

TestFamily transported(const TestFamily& fam, const MobiusMap& inv) {
  std::vector<FamilyMember> out;
  for (const auto& m : fam.members()) {
    out.push_back({simplify(normalize_origin(compose_mobius(m.expr, inv))), m.certificate, m.provenance + " transported"});
  }
  return TestFamily::unchecked(std::move(out));
}

std::vector<Check> mobius_checks(std::uint64_t seed, const Tolerances& tol) {
  std::mt19937_64 rng(mix(seed, 800));
  std::normal_distribution<double> g(0.0, 1.0);
  const HoloExpr f = random_vector_function(2, mix(seed, 801));
  const auto pts = sample_disc(SampleScheme::pseudo_hyperbolic, 6, mix(seed, 802), 0.8);
  std::vector<SampleEntry> entries;
  for (const auto& z : pts) entries.push_back({Complex(g(rng), g(rng)), z});
  const WeightedSample sample(entries);
  PhaseConvexSpec pc;
  pc.random_combinations = 4;
  pc.seed = mix(seed, 803);
  const TestFamily fam = make_family(FamilySpec{sample_disc(SampleScheme::pseudo_hyperbolic, 8, mix(seed, 804), 0.8), pc,
                                                std::nullopt});
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const MobiusMap phi = random_automorphism(mix(seed, 810 + i), 0.6);
    const MobiusMap inv = mobius_inverse(phi);
    const HoloExpr ft = simplify(normalize_origin(compose_mobius(f, inv)));
    const TestFamily famt = transported(fam, inv);
    std::vector<SampleEntry> moved;
    for (const auto& e : entries) moved.push_back({e.lambda * std::abs(mobius_derivative(phi, e.z)), mobius_apply(phi, e.z)});
    const WeightedSample st(moved);
    for (double p : {1.0, 2.0, kInf}) {
      const auto a = summing_estimate(f, sample, fam, p);
      const auto b = summing_estimate(ft, st, famt, p);
      worst = std::max({worst, rel_err(b.numerator, a.numerator), rel_err(b.denominator_family, a.denominator_family)});
    }
  }
  return {measured("summing.mobius_equivariance", true, -worst, tol, "mobius", {{"automorphisms", 10}})};
}

std::vector<Check> tensor_checks(std::uint64_t seed, const Tolerances& tol) {
  std::mt19937_64 rng(mix(seed, 900));
  std::normal_distribution<double> g(0.0, 1.0);
  const auto as = sample_disc(SampleScheme::pseudo_hyperbolic, 20, mix(seed, 901), 0.9);
  const TestFamily fam = make_family(FamilySpec{as, std::nullopt, std::nullopt});
  double exact = 0.0;
  double upper = kInf;
  for (const auto& a : as) {
    std::vector<Complex> x(3);
    for (auto& c : x) c = Complex(g(rng), g(rng));
    const double xn = vector_norm(x, NormKind::euclidean);
    const HoloExpr f = HoloExpr::tensor(extremal(a), x);
    for (double p : {1.0, 2.0, kInf}) {
      exact = std::max(exact, std::abs(summing_estimate(f, WeightedSample({{Complex(1.0, 0.0), a}}), fam, p).certified_lower - xn));
      std::vector<SampleEntry> e;
      for (const auto& z : sample_disc(SampleScheme::pseudo_hyperbolic, 5, rng(), 0.9)) e.push_back({Complex(g(rng), g(rng)), z});
      upper = std::min(upper, xn - summing_estimate(f, WeightedSample(e), fam, p).certified_lower);
    }
  }
  return {measured("summing.tensor_exactness", true, -exact, tol, "tensor_exactness"),
          measured("summing.tensor_upper", true, upper, tol, "tensor_exactness")};
}

std::vector<Check> algebra_checks(std::uint64_t seed, const Tolerances& tol) {
  double hom = 0.0;
  double sub = kInf;
  const Complex lam(2.0, -3.0);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto inst = random_summing_instance(mix(seed, 1000 + i));
    const HoloExpr f2 = random_vector_function(2, mix(seed, 1050 + i));
    const HoloExpr scaled = HoloExpr::scale(lam, inst.f);
    const auto sample = WeightedSample::uniform(inst.points);
    for (double p : {1.0, 2.0, 4.0, kInf}) {
      const auto a = summing_estimate(inst.f, sample, inst.family, p);
      const auto b = summing_estimate(scaled, sample, inst.family, p);
      hom = std::max({hom, rel_err(b.numerator, std::abs(lam) * a.numerator),
                      rel_err(b.denominator_family, a.denominator_family)});
      if (std::isfinite(p)) {
        hom = std::max(hom, rel_err(pietsch_lp(scaled, inst.points, inst.family, p).constant,
                                    std::abs(lam) * pietsch_lp(inst.f, inst.points, inst.family, p).constant));
      }
      const auto c = summing_estimate(HoloExpr::sum({inst.f, f2}), sample, inst.family, p);
      const auto d = summing_estimate(f2, sample, inst.family, p);
      sub = std::min(sub, a.numerator + d.numerator - c.numerator);
    }
  }
  // LP constants are optimal only to the LP tolerance, so homogeneity of c uses the duality tolerance.
  return {measured("summing.homogeneity", true, -hom, tol, "duality"),
          measured("summing.subadditivity", true, sub, tol, "subadditivity")};
}

std::vector<Check> maurey_checks(std::uint64_t seed, const Tolerances& tol) {
  double theta = 0.0;
  double holder = kInf;
  double stated = kInf;
  double fin = kInf;
  double func = kInf;
  Json per = Json::array();
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto inst = random_summing_instance(mix(seed, 1100 + i));
    const auto r = maurey_extrapolate(inst.f, inst.points, inst.family, 2.0, 4.0, 6);
    theta = std::max(theta, std::max(r.theta_consistency, std::abs(r.theta - 2.0 / 3.0)));
    holder = std::min(holder, r.worst_holder_margin);
    stated = std::min(stated, r.worst_interpolation_margin);
    fin = std::min(fin, r.worst_final_margin);
    func = std::min(func, r.worst_function_margin);
    per.push_back({{"c_max", r.c_max}, {"big_c", r.big_c}, {"final_margin", r.worst_final_margin},
                   {"interpolation_margin", r.worst_interpolation_margin}});
  }
  Check s = measured("summing.maurey_interpolation_norm_form", false, stated, tol, "interpolation");
  s.message = "||v||_p <= ||v||_1^theta ||v||_q^(1-theta) with p = theta + (1-theta) q does not follow from Hoelder";
  Check f = measured("summing.maurey_final_bound", false, std::min(fin, func), tol, "interpolation", {{"instances", per}});
  f.message = "C = 2 (2 c_max)^(1/theta), depth 6, p = 2, q = 4";
  return {measured("summing.maurey_theta", true, -theta, tol, "theta"),
          measured("summing.maurey_holder", true, holder, tol, "interpolation"), s, f};
}

Molecule with_repeats(const Molecule& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto atoms = m.atoms();
  const std::size_t n = atoms.size();
  for (std::size_t i = 0; i < n; ++i) {
    Atom a = atoms[i];
    a.lambda = Complex(g(rng), g(rng));
    for (auto& c : a.x) c = Complex(g(rng), g(rng));
    atoms.push_back(a);
  }
  if (!atoms.empty()) {
    Atom neg = atoms.front();
    neg.lambda = -neg.lambda;
    atoms.push_back(neg);
  }
  return Molecule(std::move(atoms), m.dimension(), m.norm());
}

std::vector<Check> molecule_checks(std::uint64_t seed, const Tolerances& tol) {
  const TestFamily fam = make_family(
      FamilySpec{sample_disc(SampleScheme::pseudo_hyperbolic, 24, mix(seed, 1200), 0.9),
                 PhaseConvexSpec{{}, {}, 8, 3, mix(seed, 1201)}, std::nullopt});
  const std::vector<double> ps{1.0, 2.0, kInf};
  double sandwich_margin = kInf;
  double d1 = kInf;
  double bil = 0.0;
  double repr = 0.0;
  double dual = kInf;
  double cross_atom = kInf;
  double cross_dual = kInf;
  double hom = 0.0;
  double concat = kInf;
  double balanced = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const NormKind norm = i % 2 == 0 ? NormKind::euclidean : NormKind::sup;
    const Molecule m = random_molecule(1 + i % 5, 3, norm, mix(seed, 1300 + i));
    const Molecule m2 = random_molecule(1 + (i + 2) % 4, 3, norm, mix(seed, 1400 + i));
    const auto probes = default_probes(m, fam, 8, mix(seed, 1500 + i));
    for (double p : ps) {
      const auto sw = sandwich(m, p, probes);
      sandwich_margin = std::min(sandwich_margin, sw.upper - sw.lower);
    }
    const double c1 = cs_upper(m, 1.0);
    for (double p : {1.5, 2.0, 3.0, kInf}) d1 = std::min(d1, c1 - cs_upper(m, p));

    const HoloExpr f1 = random_vector_function(3, mix(seed, 1600 + i));
    const HoloExpr f2 = random_vector_function(3, mix(seed, 1700 + i));
    bil = std::max({bil, rel_err(pairing(m + m2, f1), pairing(m, f1) + pairing(m2, f1)),
                    rel_err(pairing(m, HoloExpr::sum({f1, f2})), pairing(m, f1) + pairing(m, f2))});

    const Molecule rep = with_repeats(m, mix(seed, 1800 + i));
    const auto rprobes = random_probes(3, norm, 20, mix(seed, 1900 + i));
    auto pair_gap = [&](const Molecule& a, const Molecule& b) {
      double w = 0.0;
      for (const auto& pr : rprobes) w = std::max(w, rel_err(pairing(a, pr.as_function()), pairing(b, pr.as_function())));
      return w;
    };
    repr = std::max({repr, pair_gap(merge_atoms(rep).molecule, rep), pair_gap(cancel_atoms(rep).molecule, rep),
                     pair_gap(rebalance(rep, 2.0).molecule, rep), pair_gap(best_representation(rep, 1.5).molecule, rep),
                     pair_gap(balanced_concatenation(m, m2, 2.0).molecule, m + m2)});

    for (const auto& pr : rprobes) {
      const double lhs = std::abs(pairing(m, pr.as_function()));
      for (double p : ps) {
        dual = std::min(dual, pr.certificate * dual_norm(pr.functional, norm) *
                                  cs_upper(m, conjugate_exponent(p)) - lhs);
      }
    }
    const auto cr = crossnorm_check(m, probes[i % probes.size()], 2.0);
    cross_atom = std::min(cross_atom, cr.atom_margin);
    cross_dual = std::min(cross_dual, cr.duality_margin);

    const Complex lam(-1.5, 0.5);
    for (double p : ps) {
      hom = std::max(hom, rel_err(cs_upper(m.scaled(lam), p), std::abs(lam) * cs_upper(m, p)));
      concat = std::min(concat, cs_upper(m, p) + cs_upper(m2, p) - cs_upper(m + m2, p));
      balanced = std::max(balanced, rel_err(representation_value(balanced_concatenation(m, m2, p).molecule, p),
                                            representation_value(m, p) + representation_value(m2, p)));
    }
  }

  double single = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const NormKind norm = i % 2 == 0 ? NormKind::euclidean : NormKind::sup;
    const Molecule m = random_molecule(1, 3, norm, mix(seed, 2000 + i));
    const auto& a = m.atoms().front();
    const double v = std::abs(a.lambda) * vector_norm(a.x, norm) / a.z.weight();
    const auto probes = default_probes(m, fam, 8, mix(seed, 2100 + i));
    for (double p : ps) {
      const auto sw = sandwich(m, p, probes);
      single = std::max({single, std::abs(sw.lower - v), std::abs(sw.upper - v)});
    }
  }

  return {
      measured("molecules.balanced_concatenation", true, -balanced, tol, "homogeneity"),
      measured("molecules.bilinearity", true, -bil, tol, "bilinearity"),
      measured("molecules.concatenation_subadditive", true, concat, tol, "homogeneity"),
      measured("molecules.crossnorm_atoms", true, cross_atom, tol, "atom_bound", {{"instances", 100}}),
      measured("molecules.crossnorm_duality", true, cross_dual, tol, "crossnorm", {{"instances", 100}}),
      measured("molecules.d1_dominance", true, d1, tol, "sandwich"),
      measured("molecules.duality_inequality", true, dual, tol, "crossnorm"),
      measured("molecules.homogeneity", true, -hom, tol, "homogeneity"),
      measured("molecules.representation_equivalence", true, -repr, tol, "representation"),
      measured("molecules.sandwich", true, sandwich_margin, tol, "sandwich", {{"molecules", 100}}),
      measured("molecules.single_atom_tightness", true, -single, tol, "single_atom", {{"atoms", 20}}),
  };
}

std::vector<Check> scenario_checks(const Tolerances& tol) {
  Report r = run_scenario(prop1_inclusions_scenario(), tol);
  for (auto& c : r.checks) c.name = "scenario." + c.name;
  return r.checks;
}

}  // namespace

Report verify_all(const VerifyOptions& options, const Tolerances& tol) {
  const std::uint64_t seed = options.seed;
  std::vector<Task> tasks{
      {"disc", [&] { return disc_checks(seed, tol); }},
      {"holo", [&] { return derivative_checks(seed, tol); }},
      {"norms", [&] { return extremal_checks(seed, tol); }},
      {"family", [&] { return family_checks(seed, options.inject_corrupted_certificate, tol); }},
      {"summing.lp", [&] { return lp_checks(seed, tol); }},
      {"summing.new_points", [&] { return new_point_checks(seed, tol); }},
      {"summing.infinity", [&] { return infinity_checks(seed, tol); }},
      {"summing.mobius", [&] { return mobius_checks(seed, tol); }},
      {"summing.tensor", [&] { return tensor_checks(seed, tol); }},
      {"summing.algebra", [&] { return algebra_checks(seed, tol); }},
      {"summing.maurey", [&] { return maurey_checks(seed, tol); }},
      {"molecules", [&] { return molecule_checks(seed, tol); }},
      {"scenario", [&] { return scenario_checks(tol); }},
  };

  std::vector<std::vector<Check>> results(tasks.size());
  std::vector<double> elapsed(tasks.size(), 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        results[i] = tasks[i].run();
      } catch (const Error& e) {
        results[i] = {errored(tasks[i].name, e.kind(), e.what())};
      } catch (const std::exception& e) {
        results[i] = {errored(tasks[i].name, "InternalError", e.what())};
      }
      elapsed[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Report rep;
  rep.version = tool_version();
  rep.seed = seed;
  rep.scenario = {{"suite", "verify_all"}, {"inject_corrupted_certificate", options.inject_corrupted_certificate}};
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (auto& c : results[i]) rep.checks.push_back(std::move(c));
    rep.timing_ms[tasks[i].name] = elapsed[i];
  }
  sort_checks(rep.checks);
  return rep;
}

}  // namespace bloch
