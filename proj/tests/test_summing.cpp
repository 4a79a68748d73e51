#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "bloch/errors.hpp"
#include "bloch/instances.hpp"
#include "bloch/sampling.hpp"
#include "bloch/summing.hpp"

using namespace bloch;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TestFamily extremals(const std::vector<DiscPoint>& centers) {
  return make_family(FamilySpec{centers, std::nullopt, std::nullopt});
}

// Best value of sum_j u_j b_j / max_k sum_j u_j A_jk over a simplex grid with
// the given number of steps. A lower bound on the LP optimum.
double simplex_grid_dual(const std::vector<double>& b, const std::vector<std::vector<double>>& a, int steps) {
  const std::size_t n = b.size();
  std::vector<int> c(n, 0);
  double best = 0.0;
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == n) {
      c[j] = left;
      double num = 0.0;
      for (std::size_t i = 0; i < n; ++i) num += c[i] * b[i];
      double den = 0.0;
      for (std::size_t k = 0; k < a[0].size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += c[i] * a[i][k];
        den = std::max(den, s);
      }
      if (den > 0.0) best = std::max(best, num / den);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, steps);
  return best;
}

}  // namespace

TEST_SUITE("summing") {
  TEST_CASE("summing estimate examples") {
    const TestFamily f0 = extremals({DiscPoint()});
    const auto e1 = summing_estimate(HoloExpr::monomial(1), WeightedSample({{1.0, DiscPoint()}}), f0, 2.0);
    CHECK(e1.denominator_family == doctest::Approx(1.0));
    CHECK(e1.denominator_closed_form == doctest::Approx(1.0));

    const TestFamily fh = extremals({DiscPoint(0.5, 0.0)});
    const auto d2 = denominator(WeightedSample({{1.0, DiscPoint(0.5, 0.0)}}), fh, 1.0);
    CHECK(d2.family_value == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(d2.closed_form_value == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

    // |f_0'| = 1 at both points, so the family side is 2.
    const auto d3 = denominator(WeightedSample({{1.0, DiscPoint()}, {1.0, DiscPoint(0.5, 0.0)}}), f0, 1.0);
    CHECK(d3.family_value == doctest::Approx(2.0));
    CHECK(d3.closed_form_value == doctest::Approx(1.0 + 4.0 / 3.0));
  }

  TEST_CASE("denominator matches brute-force evaluation over the family") {
    const auto pts = sample_disc(SampleScheme::pseudo_hyperbolic, 6, 3, 0.9);
    const TestFamily fam = default_family(pts, 4);
    std::vector<SampleEntry> e;
    for (std::size_t i = 0; i < pts.size(); ++i) e.push_back({Complex(0.3 * i - 0.5, 0.2), pts[i]});
    for (double p : {1.0, 2.0, 3.5, kInf}) {
      double best = 0.0;
      for (const auto& m : fam.members()) {
        double s = 0.0;
        for (const auto& en : e) {
          const double v = std::abs(en.lambda) * std::abs(m.expr.scalar_derivative_at(en.z.value())) / m.certificate;
          s = std::isfinite(p) ? s + std::pow(v, p) : std::max(s, v);
        }
        best = std::max(best, std::isfinite(p) ? std::pow(s, 1.0 / p) : s);
      }
      CHECK(denominator(WeightedSample(e), fam, p).family_value == doctest::Approx(best).epsilon(1e-13));
    }
  }

  TEST_CASE("tensor and family-member estimates") {
    const TestFamily f0 = extremals({DiscPoint()});
    const HoloExpr f = HoloExpr::tensor(extremal(DiscPoint()), {{2.0, 0.0}, {0.0, 0.0}});
    const auto e = summing_estimate(f, WeightedSample({{1.0, DiscPoint()}}), f0, 1.0);
    CHECK(e.numerator == doctest::Approx(2.0));
    CHECK(e.denominator_closed_form == doctest::Approx(1.0));
    CHECK(e.certified_lower == doctest::Approx(2.0));

    const auto pts = sample_disc(SampleScheme::pseudo_hyperbolic, 5, 8, 0.9);
    const TestFamily fam = extremals(pts);
    const DiscPoint z(0.2, -0.6);
    for (const auto& m : fam.members()) {
      const auto est = summing_estimate(m.expr, WeightedSample({{1.0, z}}), fam, 2.0);
      const double want = std::abs(m.expr.scalar_derivative_at(z.value())) * z.weight();
      CHECK(est.certified_lower == doctest::Approx(want).epsilon(1e-13));
      CHECK(est.certified_lower <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("infinity ratio equals the sampled seminorm") {
    const auto pts = sample_disc(SampleScheme::pseudo_hyperbolic, 7, 9, 0.9);
    const HoloExpr f = HoloExpr::tensor(extremal(DiscPoint()), {{0.6, 0.0}, {0.0, 0.8}});
    std::vector<SampleEntry> e;
    double sampled = 0.0;
    for (const auto& z : pts) {
      e.push_back({z.weight(), z});
      sampled = std::max(sampled, z.weight() * vector_norm(f.derivative_at(z.value()), NormKind::euclidean));
    }
    CHECK(std::abs(summing_estimate(f, WeightedSample(e), extremals(pts), kInf).heuristic_ratio - sampled) < 1e-12);
  }

  TEST_CASE("pietsch LP hand examples") {
    const HoloExpr id = HoloExpr::monomial(1);
    const auto m1 = pietsch_lp(id, {DiscPoint()}, extremals({DiscPoint()}), 1.0);
    CHECK(m1.constant == doctest::Approx(1.0));
    REQUIRE(m1.weights.size() == 1);
    CHECK(m1.weights[0] == doctest::Approx(1.0));

    const std::vector<DiscPoint> pts{DiscPoint(), DiscPoint(0.6, 0.0)};
    const auto m2 = pietsch_lp(id, pts, extremals(pts), 1.0);
    CHECK(m2.constant == doctest::Approx(1.0));
    REQUIRE(m2.weights.size() == 2);
    CHECK(m2.weights[0] == doctest::Approx(1.0));
    CHECK(m2.weights[1] == doctest::Approx(0.0));

    const auto m3 = pietsch_lp(HoloExpr::scale(2.0, extremal(DiscPoint())), {DiscPoint()}, extremals({DiscPoint()}), 2.0);
    CHECK(m3.constant == doctest::Approx(2.0));

    const auto dom = domination_check(id, {DiscPoint(0.3, 0.0)}, m2);
    REQUIRE(dom.entries.size() == 1);
    CHECK(dom.entries[0].lhs == doctest::Approx(1.0));
    CHECK(dom.entries[0].rhs == doctest::Approx(1.0));
    CHECK(std::abs(dom.entries[0].margin) < 1e-12);
  }

  TEST_CASE("LP infeasibility is reported") {
    // Every member has vanishing derivative at 0 while f does not.
    std::vector<FamilyMember> members{{HoloExpr::monomial(2), 1.0, "w^2"}};
    const TestFamily fam = TestFamily::unchecked(members);
    CHECK_THROWS_AS(pietsch_lp(HoloExpr::monomial(1), {DiscPoint()}, fam, 2.0), Infeasible);
  }

  TEST_CASE("dual LP agrees with a brute-force simplex search") {
    const HoloExpr f = random_vector_function(2, 77);
    const auto pts = sample_disc(SampleScheme::pseudo_hyperbolic, 5, 78, 0.85);
    auto centers = pts;
    for (const auto& z : sample_disc(SampleScheme::pseudo_hyperbolic, 3, 79, 0.85)) centers.push_back(z);
    const TestFamily fam = extremals(centers);
    REQUIRE(fam.size() == 8);
    const double p = 2.0;
    std::vector<double> b;
    std::vector<std::vector<double>> a;
    for (const auto& z : pts) {
      b.push_back(std::pow(vector_norm(f.derivative_at(z.value()), NormKind::euclidean), p));
      std::vector<double> row;
      for (const auto& m : fam.members()) row.push_back(std::pow(std::abs(m.expr.scalar_derivative_at(z.value())), p));
      a.push_back(row);
    }
    const auto d = lp_duality_check(f, pts, fam, p);
    CHECK(d.pass);
    CHECK(d.relative_gap <= 1e-7);
    CHECK(d.witness_ratio_gap <= 1e-7);
    const double grid = simplex_grid_dual(b, a, 24);
    CHECK(grid <= d.dual_value * (1.0 + 1e-12));
    CHECK(grid >= 0.97 * d.dual_value);
    CHECK(std::pow(d.constant, p) == doctest::Approx(d.primal_value).epsilon(1e-12));
  }

  TEST_CASE("dual witness on the trivial instance") {
    const auto d = lp_duality_check(HoloExpr::monomial(1), {DiscPoint()}, extremals({DiscPoint()}), 1.0);
    CHECK(d.dual_value == doctest::Approx(1.0));
    REQUIRE(d.dual_weights.size() == 1);
    CHECK(d.dual_weights[0] == doctest::Approx(1.0));
  }

  TEST_CASE("constants are non-increasing in p and domination holds at solved points") {
    for (std::uint64_t s = 0; s < 15; ++s) {
      const auto inst = random_summing_instance(s);
      double prev = kInf;
      for (double p : {1.0, 1.25, 2.0, 3.0, 6.0}) {
        const auto mu = pietsch_lp(inst.f, inst.points, inst.family, p);
        CHECK(mu.constant <= prev + 1e-9);
        prev = mu.constant;
        CHECK(std::accumulate(mu.weights.begin(), mu.weights.end(), 0.0) == doctest::Approx(1.0));
        CHECK(domination_check(inst.f, inst.points, mu).worst_margin >= -1e-9);
      }
    }
  }

  TEST_CASE("factorization on the trivial instance") {
    const auto mu = pietsch_lp(HoloExpr::monomial(1), {DiscPoint()}, extremals({DiscPoint()}), 2.0);
    const auto cert = factorize(HoloExpr::monomial(1), {DiscPoint()}, mu);
    REQUIRE(cert.operator_matrix.size() == 1);
    REQUIRE(cert.operator_matrix[0].size() == 1);
    CHECK(std::abs(cert.operator_matrix[0][0] - 1.0) < 1e-12);
    CHECK(cert.residual < 1e-14);
    CHECK(cert.operator_norm_estimate == doctest::Approx(1.0));
  }

  TEST_CASE("factorization on the two-point hand instance") {
    const std::vector<DiscPoint> pts{DiscPoint(), DiscPoint(0.6, 0.0)};
    const auto mu = pietsch_lp(HoloExpr::monomial(1), pts, extremals(pts), 2.0);
    const auto cert = factorize(HoloExpr::monomial(1), pts, mu);
    CHECK(cert.residual <= 1e-10);
    CHECK(cert.operator_norm_estimate <= mu.constant + 1e-6);
  }

  TEST_CASE("operator norm estimate agrees with a dense SVD") {
    int checked = 0;
    for (std::uint64_t s = 0; s < 50 && checked < 5; ++s) {
      const auto inst = random_summing_instance(s);
      const auto mu = pietsch_lp(inst.f, inst.points, inst.family, 2.0);
      FactorizationCertificate cert;
      try {
        cert = factorize(inst.f, inst.points, mu);
      } catch (const RankDeficiency&) {
        continue;
      }
      ++checked;
      // On the span: sup ||T u|| / ||mu^(1/2) u|| over u = V alpha, V_aj = g_a'(z_j).
      const auto m = static_cast<Eigen::Index>(cert.active_members.size());
      const auto n = static_cast<Eigen::Index>(inst.points.size());
      const auto d = static_cast<Eigen::Index>(cert.operator_matrix.size());
      Eigen::MatrixXcd t(d, m), w(m, n);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index a = 0; a < m; ++a) t(i, a) = cert.operator_matrix[i][a];
      for (Eigen::Index a = 0; a < m; ++a) {
        const double sw = std::sqrt(mu.weights[cert.active_members[a]]);
        for (Eigen::Index j = 0; j < n; ++j) {
          w(a, j) = sw * inst.family[cert.active_members[a]].expr.scalar_derivative_at(inst.points[j].value());
        }
        t.col(a) /= sw;
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeThinU);
      const Eigen::Index r = svd.rank();
      const Eigen::MatrixXcd q = svd.matrixU().leftCols(r);
      const double oracle = Eigen::JacobiSVD<Eigen::MatrixXcd>(t * q).singularValues()(0);
      CHECK(cert.operator_norm_estimate == doctest::Approx(oracle).epsilon(1e-6));
    }
    CHECK(checked > 0);
  }

  TEST_CASE("maurey constants") {
    CHECK(std::abs(maurey_theta(2.0, 4.0) - 2.0 / 3.0) < 1e-15);
    CHECK_THROWS_AS(maurey_theta(4.0, 2.0), InvalidArgument);
    const auto r = maurey_extrapolate(HoloExpr::monomial(1), {DiscPoint()}, extremals({DiscPoint()}), 2.0, 4.0, 6);
    CHECK(r.theta_consistency < 1e-12);
    CHECK(r.c_max == doctest::Approx(1.0));
    CHECK(r.big_c == doctest::Approx(2.0 * std::pow(2.0, 1.5)));
    CHECK(r.big_c == doctest::Approx(5.657).epsilon(1e-4));
    CHECK(r.stages.size() == 7);
    CHECK(std::accumulate(r.mixture.begin(), r.mixture.end(), 0.0) == doctest::Approx(1.0));
  }

  TEST_CASE("integral Hoelder form holds along the pipeline") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto inst = random_summing_instance(s);
      const auto r = maurey_extrapolate(inst.f, inst.points, inst.family, 2.0, 4.0, 6);
      CHECK(r.worst_holder_margin >= -1e-12);
      CHECK(r.big_c == doctest::Approx(2.0 * std::pow(2.0 * r.c_max, 1.0 / r.theta)));
    }
  }
}
