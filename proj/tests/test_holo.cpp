#include <doctest.h>

#include "bloch/errors.hpp"
#include "bloch/holo_expr.hpp"
#include "bloch/instances.hpp"
#include "bloch/sampling.hpp"

using namespace bloch;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// One expression per node kind, plus nested combinations.
std::vector<HoloExpr> zoo() {
  const MobiusMap phi({0.6, 0.8}, DiscPoint(0.3, -0.2));
  return {
      HoloExpr::monomial(0),
      HoloExpr::monomial(3),
      HoloExpr::extremal(DiscPoint(0.5, 0.4)),
      HoloExpr::sum({HoloExpr::monomial(2), HoloExpr::extremal(DiscPoint(-0.7, 0.1))}),
      HoloExpr::scale({2.0, -1.0}, HoloExpr::monomial(4)),
      HoloExpr::precompose(phi, HoloExpr::monomial(2)),
      HoloExpr::precompose(phi, HoloExpr::extremal(DiscPoint(0.1, 0.5))),
      HoloExpr::tensor(HoloExpr::monomial(2), {{1.0, 0.0}, {0.0, 2.0}, {-1.0, 1.0}}),
      HoloExpr::taylor({{1.0, 0.0}, {0.5, 0.5}, {0.0, -2.0}, {0.25, 0.0}}, 0.95),
      HoloExpr::precompose(phi, HoloExpr::taylor({{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.0}}, 0.99)),
      random_vector_function(3, 11),
  };
}

}  // namespace

TEST_SUITE("holo_expr") {
  TEST_CASE("evaluation examples") {
    CHECK(std::abs(HoloExpr::extremal(DiscPoint(0.5, 0.0)).scalar_value_at(0.0)) < 1e-15);
    CHECK(std::abs(HoloExpr::extremal(DiscPoint()).scalar_value_at(0.3) - 0.3) < 1e-15);
    CHECK(std::abs(HoloExpr::extremal(DiscPoint(0.5, 0.0)).scalar_value_at(0.5) - 0.5) < 1e-15);
  }

  TEST_CASE("derivative examples") {
    CHECK(std::abs(HoloExpr::extremal(DiscPoint(0.5, 0.0)).scalar_derivative_at(0.5) - 4.0 / 3.0) < 1e-15);
    CHECK(std::abs(HoloExpr::extremal(DiscPoint(0.5, 0.0)).scalar_derivative_at(0.0) - 0.75) < 1e-15);
    CHECK(std::abs(HoloExpr::monomial(1).scalar_derivative_at({0.2, -0.9}) - 1.0) < 1e-15);
    const auto d = holo_deriv(HoloExpr::tensor(HoloExpr::monomial(2), {{0.0, 0.0}, {3.0, 0.0}}), DiscPoint(0.5, 0.0));
    REQUIRE(d.dimension() == 2);
    CHECK(std::abs(d.components[0]) < 1e-15);
    CHECK(std::abs(d.components[1] - 3.0) < 1e-15);
  }

  TEST_CASE("derivatives agree with central differences") {
    const double h = 1e-5;
    for (const auto& f : zoo()) {
      for (const auto& z : sample_disc(SampleScheme::pseudo_hyperbolic, 20, 5, 0.9)) {
        const auto exact = f.derivative_at(z.value());
        const auto fp = f.value_at(z.value() + h);
        const auto fm = f.value_at(z.value() - h);
        const auto fpi = f.value_at(z.value() + Complex(0.0, h));
        const auto fmi = f.value_at(z.value() - Complex(0.0, h));
        for (std::size_t j = 0; j < exact.size(); ++j) {
          CHECK(rel((fp[j] - fm[j]) / (2.0 * h), exact[j]) < 1e-6);
          // Holomorphy: the derivative along i is i times the derivative along 1.
          CHECK(rel((fpi[j] - fmi[j]) / (2.0 * h), Complex(0.0, 1.0) * exact[j]) < 1e-6);
        }
      }
    }
  }

  TEST_CASE("chain rule for precomposition") {
    const MobiusMap phi({0.0, 1.0}, DiscPoint(-0.4, 0.3));
    const HoloExpr f = HoloExpr::sum({HoloExpr::monomial(3), HoloExpr::extremal(DiscPoint(0.2, 0.2))});
    const HoloExpr g = HoloExpr::precompose(phi, f);
    for (const auto& z : sample_disc(SampleScheme::polar_grid, 30, 0, 0.9)) {
      const Complex w = phi.apply_raw(z.value());
      const Complex direct = f.scalar_derivative_at(w) * mobius_derivative(phi, z);
      CHECK(std::abs(g.scalar_derivative_at(z.value()) - direct) < 1e-12);
    }
  }

  TEST_CASE("taylor validity radius") {
    const HoloExpr t = HoloExpr::taylor({{0.0, 0.0}, {1.0, 0.0}}, 0.5);
    CHECK_NOTHROW(t.value_at(0.5));
    CHECK_THROWS_AS(t.value_at(0.6), OutOfValidity);
    CHECK_THROWS_AS(t.derivative_at(Complex(0.0, 0.7)), OutOfValidity);
  }

  TEST_CASE("normalize_origin") {
    const HoloExpr t = normalize_origin(HoloExpr::taylor({{5.0, 0.0}, {1.0, 0.0}}, 0.95));
    for (Complex z : {Complex(0.0, 0.0), Complex(0.3, 0.2), Complex(-0.5, 0.0)}) {
      CHECK(std::abs(t.scalar_value_at(z) - z) < 1e-15);
    }
    const HoloExpr e = HoloExpr::extremal(DiscPoint(0.3, 0.1));
    CHECK(approx_equal(normalize_origin(e), e, 1e-15));

    const std::vector<Complex> x{{1.0, 0.0}, {0.0, -2.0}};
    const HoloExpr f = HoloExpr::tensor(HoloExpr::sum({HoloExpr::monomial(2), HoloExpr::monomial(0)}), x);
    const HoloExpr g = normalize_origin(f);
    const HoloExpr want = HoloExpr::tensor(HoloExpr::monomial(2), x);
    for (const auto& z : sample_disc(SampleScheme::polar_grid, 10, 0, 0.9)) {
      const auto gv = g.value_at(z.value());
      const auto wv = want.value_at(z.value());
      for (std::size_t j = 0; j < gv.size(); ++j) CHECK(std::abs(gv[j] - wv[j]) < 1e-15);
      const auto a = f.derivative_at(z.value());
      const auto b = g.derivative_at(z.value());
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
    }
  }

  TEST_CASE("vector norms and duality") {
    const std::vector<Complex> x{{3.0, 0.0}, {0.0, 4.0}};
    CHECK(vector_norm(x, NormKind::euclidean) == doctest::Approx(5.0));
    CHECK(vector_norm(x, NormKind::sup) == doctest::Approx(4.0));
    CHECK(dual_norm(x, NormKind::sup) == doctest::Approx(7.0));
    CHECK(dual_norm(x, NormKind::euclidean) == doctest::Approx(5.0));
    for (NormKind k : {NormKind::euclidean, NormKind::sup}) {
      const auto xs = norming_functional(x, k);
      Complex v = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) v += xs[i] * x[i];
      CHECK(std::abs(v - vector_norm(x, k)) < 1e-14);
      CHECK(dual_norm(xs, k) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("dimension mismatch in sums") {
    CHECK_THROWS_AS(HoloExpr::sum({HoloExpr::tensor(HoloExpr::monomial(1), {{1.0, 0.0}, {0.0, 1.0}}),
                                   HoloExpr::monomial(2)}),
                    DimensionMismatch);
  }
}
