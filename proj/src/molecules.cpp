#include "bloch/molecules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bloch/errors.hpp"
#include "bloch/sampling.hpp"

namespace bloch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("exponent must lie in [1, inf]");
}

// ||v||_p for nonnegative entries, with the max at p = inf.
double lp_norm(const std::vector<double>& v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double a : v) m = std::max(m, a);
    return m;
  }
  double s = 0.0;
  for (double a : v) s += std::pow(a, p);
  return std::pow(s, 1.0 / p);
}

double scalar_part(const Atom& a) { return std::abs(a.lambda) / a.z.weight(); }

std::vector<Complex> random_unit_functional(std::size_t d, NormKind norm, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> xs(d);
  double n = 0.0;
  while (!(n > 0.0)) {
    for (auto& c : xs) c = Complex(gauss(rng), gauss(rng));
    n = dual_norm(xs, norm);
  }
  for (auto& c : xs) c /= n;
  return xs;
}

}  // namespace

Molecule::Molecule(std::vector<Atom> atoms, std::size_t dimension, NormKind norm)
    : atoms_(std::move(atoms)), dimension_(dimension), norm_(norm) {
  if (dimension_ == 0) throw InvalidArgument("molecule dimension must be positive");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].x.size() != dimension_) {
      throw DimensionMismatch("atom " + std::to_string(i) + " has " + std::to_string(atoms_[i].x.size()) +
                              " components, expected " + std::to_string(dimension_));
    }
  }
}

namespace {

std::size_t first_dimension(const std::vector<Atom>& atoms) {
  if (atoms.empty()) throw InvalidArgument("cannot infer the dimension of an empty molecule");
  return atoms.front().x.size();
}

}  // namespace

Molecule::Molecule(std::vector<Atom> atoms, NormKind norm) : Molecule(atoms, first_dimension(atoms), norm) {}

Molecule Molecule::scaled(Complex c) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.lambda *= c;
  return Molecule(std::move(atoms), dimension_, norm_);
}

Molecule operator+(const Molecule& a, const Molecule& b) {
  if (a.dimension_ != b.dimension_) throw DimensionMismatch("molecules of different dimension");
  auto atoms = a.atoms_;
  atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
  return Molecule(std::move(atoms), a.dimension_, a.norm_);
}

Complex pairing(const Molecule& gamma, const HoloExpr& f) {
  if (f.dimension() != gamma.dimension()) {
    throw DimensionMismatch("pairing a molecule of dimension " + std::to_string(gamma.dimension()) +
                            " with a function of dimension " + std::to_string(f.dimension()));
  }
  Complex s(0.0, 0.0);
  for (const auto& a : gamma.atoms()) {
    const auto d = f.derivative_at(a.z.value());
    Complex t(0.0, 0.0);
    for (std::size_t j = 0; j < d.size(); ++j) t += d[j] * a.x[j];
    s += a.lambda * t;
  }
  return s;
}

double conjugate_exponent(double p) {
  check_exponent(p);
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double representation_value(const Molecule& gamma, double p) {
  const double ps = conjugate_exponent(p);
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& atom : gamma.atoms()) {
    a.push_back(scalar_part(atom));
    b.push_back(vector_norm(atom.x, gamma.norm()));
  }
  return lp_norm(a, ps) * lp_norm(b, p);
}

Representation merge_atoms(const Molecule& gamma) {
  std::vector<Atom> out;
  for (const auto& a : gamma.atoms()) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Atom& b) { return b.z == a.z; });
    if (it == out.end()) {
      Atom m{Complex(1.0, 0.0), a.z, a.x};
      for (auto& c : m.x) c *= a.lambda;
      out.push_back(std::move(m));
    } else {
      for (std::size_t j = 0; j < a.x.size(); ++j) it->x[j] += a.lambda * a.x[j];
    }
  }
  return {Molecule(std::move(out), gamma.dimension(), gamma.norm()), {"merge"}};
}

Representation cancel_atoms(const Molecule& gamma) {
  std::vector<Atom> out;
  for (const auto& a : gamma.atoms()) {
    if (a.lambda == Complex(0.0, 0.0) || vector_norm(a.x, gamma.norm()) == 0.0) continue;
    out.push_back(a);
  }
  return {Molecule(std::move(out), gamma.dimension(), gamma.norm()), {"cancel"}};
}

Representation rebalance(const Molecule& gamma, double p) {
  const double ps = conjugate_exponent(p);
  std::vector<Atom> out;
  for (const auto& a : gamma.atoms()) {
    const double xn = vector_norm(a.x, gamma.norm());
    const double c = scalar_part(a) * xn;
    if (c == 0.0) continue;
    // Target |lambda'| / (1 - |z|^2) = c^(1/p*) and ||x'|| = c^(1/p).
    const double target = std::isinf(ps) ? 1.0 : std::pow(c, 1.0 / ps);
    const double lam = target * a.z.weight();
    const Complex phase = a.lambda / std::abs(a.lambda);
    Atom b{phase * lam, a.z, a.x};
    const double t = std::abs(a.lambda) / lam;
    for (auto& v : b.x) v *= t;
    out.push_back(std::move(b));
  }
  return {Molecule(std::move(out), gamma.dimension(), gamma.norm()), {"rebalance"}};
}

Representation balanced_concatenation(const Molecule& a, const Molecule& b, double p) {
  const double ps = conjugate_exponent(p);
  auto balance = [&](const Molecule& m) {
    const double val = representation_value(m, p);
    if (val == 0.0) return cancel_atoms(m).molecule;
    std::vector<double> s;
    for (const auto& atom : m.atoms()) s.push_back(scalar_part(atom));
    const double scalar_norm = lp_norm(s, ps);
    const double target = std::isinf(ps) ? 1.0 : std::pow(val, 1.0 / ps);
    const double t = target / scalar_norm;
    auto atoms = m.atoms();
    for (auto& atom : atoms) {
      atom.lambda *= t;
      for (auto& v : atom.x) v /= t;
    }
    return Molecule(std::move(atoms), m.dimension(), m.norm());
  };
  return {balance(a) + balance(b), {"balanced_concatenation"}};
}

Representation best_representation(const Molecule& gamma, double p) {
  check_exponent(p);
  std::vector<Representation> candidates;
  candidates.push_back({gamma, {}});
  candidates.push_back(rebalance(gamma, p));
  auto merged = merge_atoms(gamma);
  auto cleaned = cancel_atoms(merged.molecule);
  candidates.push_back({cleaned.molecule, {"merge", "cancel"}});
  auto reb = rebalance(cleaned.molecule, p);
  candidates.push_back({reb.molecule, {"merge", "cancel", "rebalance"}});

  std::size_t best = 0;
  double best_value = representation_value(candidates[0].molecule, p);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = representation_value(candidates[i].molecule, p);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return candidates[best];
}

double projective_upper(const Molecule& gamma) { return cs_upper(gamma, 1.0); }

double cs_upper(const Molecule& gamma, double p) {
  return representation_value(best_representation(gamma, p).molecule, p);
}

std::vector<Probe> default_probes(const Molecule& gamma, const TestFamily& family, std::size_t random_functionals,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Complex>> functionals;
  for (std::size_t r = 0; r < random_functionals; ++r) {
    functionals.push_back(random_unit_functional(gamma.dimension(), gamma.norm(), rng));
  }
  std::vector<Probe> probes;
  for (std::size_t k = 0; k < family.size(); ++k) {
    for (std::size_t r = 0; r < functionals.size(); ++r) {
      probes.push_back({family[k].expr, family[k].certificate, functionals[r],
                        "family[" + std::to_string(k) + "] x random[" + std::to_string(r) + "]"});
    }
  }
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const auto& a = gamma.atoms()[i];
    if (vector_norm(a.x, gamma.norm()) == 0.0) continue;
    probes.push_back({extremal(a.z), 1.0, norming_functional(a.x, gamma.norm()),
                      "extremal x norming[" + std::to_string(i) + "]"});
  }
  return probes;
}

std::vector<Probe> random_probes(std::size_t dimension, NormKind norm, std::size_t count, std::uint64_t seed) {
  const auto centers = sample_disc(SampleScheme::pseudo_hyperbolic, count, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Probe> probes;
  for (std::size_t i = 0; i < count; ++i) {
    probes.push_back({extremal(centers[i]), 1.0, random_unit_functional(dimension, norm, rng),
                      "random[" + std::to_string(i) + "]"});
  }
  return probes;
}

LowerBound cs_lower_dual(const Molecule& gamma, double p, const std::vector<Probe>& probes) {
  check_exponent(p);
  LowerBound lb;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double scale = probes[i].certificate * dual_norm(probes[i].functional, gamma.norm());
    if (!(scale > 0.0)) continue;
    const double v = std::abs(pairing(gamma, probes[i].as_function())) / scale;
    if (v > lb.value) {
      lb.value = v;
      lb.probe = i;
    }
  }
  return lb;
}

Sandwich sandwich(const Molecule& gamma, double p, const std::vector<Probe>& probes) {
  Sandwich s;
  const auto lb = cs_lower_dual(gamma, p, probes);
  s.lower = lb.value;
  s.lower_probe = lb.probe;
  s.upper_representation = best_representation(gamma, p);
  s.upper = representation_value(s.upper_representation.molecule, p);
  return s;
}

bool equivalent(const Molecule& a, const Molecule& b, const std::vector<Probe>& probes, double tol) {
  if (a.dimension() != b.dimension()) return false;
  for (const auto& pr : probes) {
    const auto f = pr.as_function();
    if (std::abs(pairing(a, f) - pairing(b, f)) > tol) return false;
  }
  return true;
}

bool equivalent(const Molecule& a, const Molecule& b, std::uint64_t seed, double tol) {
  return equivalent(a, b, random_probes(a.dimension(), a.norm(), 20, seed), tol);
}

CrossnormReport crossnorm_check(const Molecule& gamma, const Probe& probe, double p) {
  CrossnormReport r;
  r.atom_margin = kInf;
  for (const auto& a : gamma.atoms()) {
    const Molecule single({Atom{Complex(1.0, 0.0), a.z, a.x}}, gamma.dimension(), gamma.norm());
    const double bound = vector_norm(a.x, gamma.norm()) / a.z.weight();
    r.atom_margin = std::min(r.atom_margin, bound - cs_upper(single, p));
  }
  if (gamma.empty()) r.atom_margin = 0.0;
  const double lhs = std::abs(pairing(gamma, probe.as_function()));
  r.duality_margin = probe.certificate * dual_norm(probe.functional, gamma.norm()) * projective_upper(gamma) - lhs;
  r.pass = r.atom_margin >= -1e-12 && r.duality_margin >= -1e-9;
  return r;
}

}  // namespace bloch
