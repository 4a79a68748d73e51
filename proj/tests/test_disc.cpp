#include <doctest.h>

#include "bloch/disc.hpp"
#include "bloch/errors.hpp"
#include "bloch/instances.hpp"
#include "bloch/sampling.hpp"

using namespace bloch;

namespace {

// Direct formula lambda (a - z) / (1 - conj(a) z), written out independently.
Complex phi_oracle(Complex lambda, Complex a, Complex z) { return lambda * (a - z) / (1.0 - std::conj(a) * z); }

Complex phi_prime_oracle(Complex lambda, Complex a, Complex z) {
  const double h = 1e-6;
  return (phi_oracle(lambda, a, z + h) - phi_oracle(lambda, a, z - h)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("disc") {
  TEST_CASE("points outside the open disc are rejected") {
    CHECK_THROWS_AS(DiscPoint(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(DiscPoint(0.8, 0.8), InvalidArgument);
    CHECK_NOTHROW(DiscPoint(0.999, 0.0));
    CHECK(DiscPoint(0.6, 0.0).weight() == doctest::Approx(0.64));
  }

  TEST_CASE("mobius_apply on fixed examples") {
    const MobiusMap phi({1.0, 0.0}, DiscPoint(0.5, 0.0));
    CHECK(std::abs(mobius_apply(phi, DiscPoint()).value() - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(mobius_apply(phi, DiscPoint(0.5, 0.0)).value()) < 1e-15);
    const MobiusMap rot({0.0, 1.0}, DiscPoint());
    CHECK(std::abs(mobius_apply(rot, DiscPoint(0.3, 0.0)).value() - Complex(0.0, -0.3)) < 1e-15);
  }

  TEST_CASE("mobius_derivative on fixed examples") {
    const MobiusMap phi({1.0, 0.0}, DiscPoint(0.5, 0.0));
    CHECK(std::abs(mobius_derivative(phi, DiscPoint()) - Complex(-0.75, 0.0)) < 1e-15);
    CHECK(std::abs(mobius_derivative(phi, DiscPoint(0.5, 0.0)) - Complex(-4.0 / 3.0, 0.0)) < 1e-14);
    const MobiusMap neg({1.0, 0.0}, DiscPoint());
    CHECK(std::abs(mobius_derivative(neg, DiscPoint(0.2, -0.7)) - Complex(-1.0, 0.0)) < 1e-15);
  }

  TEST_CASE("apply and derivative agree with the direct formula") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const MobiusMap phi = random_automorphism(s);
      for (const auto& z : sample_disc(SampleScheme::pseudo_hyperbolic, 8, s, 0.9)) {
        const Complex ref = phi_oracle(phi.rotation(), phi.center().value(), z.value());
        CHECK(std::abs(mobius_apply(phi, z).value() - ref) < 1e-13);
        CHECK(std::abs(mobius_derivative(phi, z) - phi_prime_oracle(phi.rotation(), phi.center().value(), z.value())) <
              1e-7);
      }
    }
  }

  TEST_CASE("involutions and inverses round-trip") {
    const MobiusMap phi({1.0, 0.0}, DiscPoint(0.5, 0.0));
    const MobiusMap inv = mobius_inverse(phi);
    CHECK(std::abs(inv.center().value() - phi.center().value()) < 1e-15);
    CHECK(std::abs(inv.rotation() - phi.rotation()) < 1e-15);
    const DiscPoint z(0.3, 0.4);
    CHECK(std::abs(mobius_apply(phi, mobius_apply(phi, z)).value() - z.value()) < 1e-15);

    const MobiusMap rot({0.0, 1.0}, DiscPoint());
    CHECK(std::abs(mobius_apply(mobius_inverse(rot), mobius_apply(rot, z)).value() - z.value()) < 1e-15);
  }

  TEST_CASE("composition matches sequential application") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const MobiusMap a = random_automorphism(s);
      const MobiusMap b = random_automorphism(s + 100);
      const MobiusMap ab = mobius_compose(a, b);
      for (const auto& z : sample_disc(SampleScheme::polar_grid, 9, 0, 0.9)) {
        CHECK(std::abs(mobius_apply(ab, z).value() - mobius_apply(a, mobius_apply(b, z)).value()) < 1e-12);
      }
      CHECK(mobius_compose(a, mobius_inverse(a)).is_identity(1e-12));
    }
  }
}

TEST_SUITE("sampling") {
  TEST_CASE("degenerate polar grid is the origin") {
    const auto pts = sample_disc(SampleScheme::polar_grid, 1, 3);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].value() == Complex(0.0, 0.0));
  }

  TEST_CASE("sampling is deterministic and respects the cap") {
    CHECK(sample_disc(SampleScheme::polar_grid, 50, 2) == sample_disc(SampleScheme::polar_grid, 50, 2));
    const auto a = sample_disc(SampleScheme::pseudo_hyperbolic, 64, 7);
    CHECK(a == sample_disc(SampleScheme::pseudo_hyperbolic, 64, 7));
    REQUIRE(a.size() == 64);
    for (const auto& z : a) CHECK(z.modulus() <= 0.95 + 1e-15);
  }

  TEST_CASE("invalid sampling arguments") {
    CHECK_THROWS_AS(sample_disc(SampleScheme::polar_grid, 10, 0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(sample_disc(SampleScheme::polar_grid, 0, 0), InvalidArgument);
  }
}
