#include <doctest.h>

#include <cmath>

#include "bloch/errors.hpp"
#include "bloch/instances.hpp"
#include "bloch/molecules.hpp"
#include "bloch/sampling.hpp"

using namespace bloch;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum_i lambda_i x*(f'(z_i) x_i)-style pairing written out for tensor probes g . xs.
Complex pairing_oracle(const Molecule& m, const HoloExpr& f) {
  Complex s = 0.0;
  for (const auto& a : m.atoms()) {
    const auto d = f.derivative_at(a.z.value());
    for (std::size_t i = 0; i < d.size(); ++i) s += a.lambda * d[i] * a.x[i];
  }
  return s;
}

TestFamily probe_family() {
  return make_family(FamilySpec{sample_disc(SampleScheme::pseudo_hyperbolic, 16, 1, 0.9),
                                PhaseConvexSpec{{}, {}, 4, 3, 2}, std::nullopt});
}

}  // namespace

TEST_SUITE("molecules") {
  TEST_CASE("pairing examples") {
    const Molecule a({Atom{1.0, DiscPoint(), {1.0, 0.0}}}, 2);
    CHECK(std::abs(pairing(a, HoloExpr::tensor(HoloExpr::monomial(1), {1.0, 0.0})) - 1.0) < 1e-15);

    const Molecule b({Atom{1.0, DiscPoint(), {1.0, 0.0}}, Atom{Complex(0.0, 1.0), DiscPoint(0.5, 0.0), {0.0, 2.0}}}, 2);
    const HoloExpr f = HoloExpr::sum({HoloExpr::tensor(HoloExpr::monomial(1), {1.0, 0.0}),
                                      HoloExpr::tensor(HoloExpr::monomial(2), {0.0, 1.0})});
    CHECK(std::abs(pairing(b, f) - Complex(1.0, 2.0)) < 1e-15);

    const Molecule zero(std::vector<Atom>{}, 2);
    CHECK(pairing(zero, f) == Complex(0.0, 0.0));
  }

  TEST_CASE("pairing is bilinear and matches the direct sum") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Molecule m = random_molecule(4, 3, NormKind::euclidean, s);
      const Molecule n = random_molecule(2, 3, NormKind::euclidean, s + 50);
      const HoloExpr f = random_vector_function(3, s + 100);
      const HoloExpr g = random_vector_function(3, s + 200);
      CHECK(std::abs(pairing(m, f) - pairing_oracle(m, f)) < 1e-12 * std::max(1.0, std::abs(pairing(m, f))));
      CHECK(std::abs(pairing(m + n, f) - pairing(m, f) - pairing(n, f)) < 1e-12 * std::max(1.0, std::abs(pairing(m, f))));
      CHECK(std::abs(pairing(m, HoloExpr::sum({f, g})) - pairing(m, f) - pairing(m, g)) <
            1e-12 * std::max(1.0, std::abs(pairing(m, f))));
      // No conjugation: scaling by i scales the pairing by i.
      CHECK(std::abs(pairing(m.scaled(Complex(0.0, 1.0)), f) - Complex(0.0, 1.0) * pairing(m, f)) < 1e-12 * std::max(1.0, std::abs(pairing(m, f))));
    }
  }

  TEST_CASE("projective upper bound examples") {
    const Molecule one({Atom{2.0, DiscPoint(0.5, 0.0), {3.0, 0.0}}}, 2);
    CHECK(projective_upper(one) == doctest::Approx(8.0));

    const std::vector<Complex> x{{0.6, 0.0}, {0.0, 0.8}};
    const DiscPoint z(0.1, 0.3);
    const Molecule twice({Atom{1.0, z, x}, Atom{1.0, z, x}}, 2);
    const auto merged = merge_atoms(twice);
    REQUIRE(merged.molecule.size() == 1);
    CHECK(std::abs(merged.molecule.atoms()[0].lambda * vector_norm(merged.molecule.atoms()[0].x, NormKind::euclidean) - 2.0) < 1e-14);
    CHECK(projective_upper(merged.molecule) == doctest::Approx(2.0 / z.weight()));

    const Molecule opposite({Atom{1.0, z, x}, Atom{-1.0, z, x}}, 2);
    const auto cancelled = best_representation(opposite, 2.0);
    CHECK(representation_value(cancelled.molecule, 2.0) == doctest::Approx(0.0));
    CHECK(cancel_atoms(merge_atoms(opposite).molecule).molecule.empty());
  }

  TEST_CASE("single atoms: every exponent gives the direct value") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      for (NormKind k : {NormKind::euclidean, NormKind::sup}) {
        const Molecule m = random_molecule(1, 3, k, s);
        const auto& a = m.atoms()[0];
        const double v = std::abs(a.lambda) * vector_norm(a.x, k) / a.z.weight();
        for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) CHECK(cs_upper(m, p) == doctest::Approx(v).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("p = 1 upper equals the projective upper and dominates other exponents") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Molecule m = random_molecule(1 + s % 5, 3, s % 2 ? NormKind::sup : NormKind::euclidean, s);
      CHECK(cs_upper(m, 1.0) == doctest::Approx(projective_upper(m)).epsilon(1e-12));
      for (double p : {1.5, 3.0, kInf}) CHECK(cs_upper(m, p) <= cs_upper(m, 1.0) + 1e-9);
    }
  }

  TEST_CASE("balanced concatenation is subadditive") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Molecule a = random_molecule(3, 2, NormKind::euclidean, s);
      const Molecule b = random_molecule(2, 2, NormKind::euclidean, s + 30);
      for (double p : {1.0, 2.0, 3.0, kInf}) {
        const auto r = balanced_concatenation(a, b, p);
        CHECK(representation_value(r.molecule, p) <=
              representation_value(a, p) + representation_value(b, p) + 1e-12);
        CHECK(equivalent(r.molecule, a + b, s));
      }
    }
  }

  TEST_CASE("rewriting moves preserve the functional") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Molecule m = random_molecule(4, 3, NormKind::euclidean, s);
      auto atoms = m.atoms();
      atoms.push_back(Atom{Complex(0.0, 2.0), atoms[0].z, atoms[1].x});
      atoms.push_back(Atom{-atoms[2].lambda, atoms[2].z, atoms[2].x});
      const Molecule r(atoms, 3);
      CHECK(equivalent(merge_atoms(r).molecule, r, s));
      CHECK(equivalent(cancel_atoms(r).molecule, r, s));
      CHECK(equivalent(rebalance(r, 2.0).molecule, r, s));
      CHECK(equivalent(best_representation(r, 1.5).molecule, r, s));
      CHECK(representation_value(best_representation(r, 2.0).molecule, 2.0) <= representation_value(r, 2.0) + 1e-12);
    }
  }

  TEST_CASE("sandwich") {
    const TestFamily fam = probe_family();
    const Molecule zero(std::vector<Atom>{}, 2);
    const auto sz = sandwich(zero, 2.0, default_probes(zero, fam));
    CHECK(sz.lower == 0.0);
    CHECK(sz.upper == 0.0);

    for (std::uint64_t s = 0; s < 10; ++s) {
      const Molecule one = random_molecule(1, 3, NormKind::euclidean, s);
      const auto& a = one.atoms()[0];
      const double v = std::abs(a.lambda) * vector_norm(a.x, NormKind::euclidean) / a.z.weight();
      const auto sw = sandwich(one, 2.0, default_probes(one, fam, 4, s));
      CHECK(sw.lower == doctest::Approx(v).epsilon(1e-9));
      CHECK(sw.upper == doctest::Approx(v).epsilon(1e-9));

      const Molecule two = random_molecule(2, 3, NormKind::sup, s + 10);
      const auto s2 = sandwich(two, 2.0, default_probes(two, fam, 8, s));
      CHECK(s2.lower <= s2.upper + 1e-9);
    }
  }

  TEST_CASE("crossnorm checks") {
    const Molecule unit({Atom{1.0, DiscPoint(), {1.0, 0.0}}}, 2);
    for (double p : {1.0, 2.0, kInf}) CHECK(cs_upper(unit, p) == doctest::Approx(1.0));

    const TestFamily fam = probe_family();
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Molecule m = random_molecule(3, 2, NormKind::euclidean, s);
      for (const auto& pr : default_probes(m, fam, 2, s)) {
        const auto r = crossnorm_check(m, pr, 2.0);
        CHECK(r.pass);
        CHECK(r.duality_margin >= -1e-9);
      }
    }
  }

  TEST_CASE("duality inequality against tensor probes") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Molecule m = random_molecule(4, 3, NormKind::sup, s);
      for (const auto& pr : random_probes(3, NormKind::sup, 10, s)) {
        const double lhs = std::abs(pairing(m, pr.as_function()));
        for (double p : {1.0, 2.0, kInf}) {
          CHECK(lhs <= pr.certificate * dual_norm(pr.functional, NormKind::sup) * cs_upper(m, conjugate_exponent(p)) + 1e-9);
        }
      }
    }
  }

  TEST_CASE("conjugate exponents") {
    CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
    CHECK(conjugate_exponent(1.0) == kInf);
    CHECK(conjugate_exponent(kInf) == 1.0);
    CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0));
  }

  TEST_CASE("dimension mismatch") {
    CHECK_THROWS_AS(Molecule({Atom{1.0, DiscPoint(), {1.0, 0.0}}}, 3), DimensionMismatch);
  }
}
