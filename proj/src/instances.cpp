#include "bloch/instances.hpp"

#include <numbers>
#include <random>

#include "bloch/sampling.hpp"

namespace bloch {

namespace {

Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

}  // namespace

HoloExpr random_vector_function(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HoloExpr> terms;
  for (int k = 1; k <= 3; ++k) {
    std::vector<Complex> x(d);
    for (auto& c : x) c = gaussian(rng) / static_cast<double>(k);
    terms.push_back(HoloExpr::tensor(HoloExpr::monomial(k), std::move(x)));
  }
  const auto center = sample_disc(SampleScheme::pseudo_hyperbolic, 1, seed + 7, 0.8).front();
  std::vector<Complex> x(d);
  for (auto& c : x) c = gaussian(rng);
  terms.push_back(HoloExpr::tensor(HoloExpr::extremal(center), std::move(x)));
  return HoloExpr::sum(std::move(terms));
}

SummingInstance random_summing_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 3 + static_cast<std::size_t>(rng() % 6);
  SummingInstance inst;
  inst.points = sample_disc(SampleScheme::pseudo_hyperbolic, n, seed, 0.9);
  FamilySpec spec;
  spec.extremal_grid = inst.points;
  for (const auto& z : sample_disc(SampleScheme::pseudo_hyperbolic, 12 - n, seed + 1000, 0.9)) {
    spec.extremal_grid.push_back(z);
  }
  inst.family = make_family(spec);
  inst.f = random_vector_function(2, seed + 2000);
  return inst;
}

Molecule random_molecule(std::size_t atoms, std::size_t d, NormKind norm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto zs = sample_disc(SampleScheme::pseudo_hyperbolic, std::max<std::size_t>(atoms, 1), seed + 1, 0.9);
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms; ++i) {
    std::vector<Complex> x(d);
    for (auto& c : x) c = gaussian(rng);
    out.push_back({gaussian(rng), zs[i], std::move(x)});
  }
  return Molecule(std::move(out), d, norm);
}

MobiusMap random_automorphism(std::uint64_t seed, double max_center) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const auto a = sample_disc(SampleScheme::pseudo_hyperbolic, 1, seed + 3, max_center).front();
  return MobiusMap(std::polar(1.0, angle(rng)), a);
}

}  // namespace bloch
