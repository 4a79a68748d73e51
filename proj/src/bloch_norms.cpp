#include "bloch/bloch_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bloch/errors.hpp"
#include "bloch/sampling.hpp"

namespace bloch {

HoloExpr extremal(DiscPoint a) { return HoloExpr::extremal(a); }

double monomial_seminorm(int degree) {
  if (degree <= 0) return 0.0;
  if (degree == 1) return 1.0;
  const double k = degree;
  const double r2 = (k - 1.0) / (k + 1.0);
  return k * std::pow(r2, (k - 1.0) / 2.0) * (1.0 - r2);
}

std::optional<double> structural_seminorm_bound(const HoloExpr& f, NormKind norm) {
  switch (f.kind()) {
    case HoloExpr::Kind::monomial:
      return monomial_seminorm(f.degree());
    case HoloExpr::Kind::extremal:
      return 1.0;
    case HoloExpr::Kind::sum: {
      double total = 0.0;
      for (const auto& c : f.children()) {
        const auto b = structural_seminorm_bound(c, norm);
        if (!b) return std::nullopt;
        total += *b;
      }
      return total;
    }
    case HoloExpr::Kind::scale: {
      const auto b = structural_seminorm_bound(f.child(), norm);
      if (!b) return std::nullopt;
      return std::abs(f.coefficient()) * *b;
    }
    case HoloExpr::Kind::precompose_mobius:
      // (1 - |z|^2)|phi'(z)| = 1 - |phi(z)|^2 for automorphisms.
      return structural_seminorm_bound(f.child(), norm);
    case HoloExpr::Kind::tensor: {
      const auto b = structural_seminorm_bound(f.child(), norm);
      if (!b) return std::nullopt;
      return *b * vector_norm(f.vector(), norm);
    }
    case HoloExpr::Kind::taylor:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

double weighted_derivative(const HoloExpr& f, Complex z, NormKind norm) {
  const double w = 1.0 - std::norm(z);
  if (f.dimension() == 1) return w * std::abs(f.scalar_derivative_at(z));
  return w * vector_norm(f.derivative_at(z), norm);
}

}  // namespace

CertBracket bloch_seminorm_bracket(const HoloExpr& f, const GridSpec& grid, NormKind norm) {
  if (grid.resolution < 1) throw InvalidArgument("grid resolution must be >= 1");
  if (!(grid.cap > 0.0 && grid.cap <= 1.0)) throw InvalidArgument("grid cap must lie in (0, 1]");

  const bool has_taylor = f.contains_taylor();
  const double extent = std::min(grid.cap, f.direct_validity_radius());
  const bool trusted_everywhere = !has_taylor || (extent >= grid.cap && !f.contains_precomposed_taylor());

  const int n_radial = grid.resolution;
  const int n_angular = 4 * grid.resolution;
  const bool closed = extent < 1.0;
  const double dr = extent / n_radial;
  const double dtheta = 2.0 * std::numbers::pi / n_angular;

  CertBracket out;
  out.lower_method = "polar-grid-max";
  out.lower = weighted_derivative(f, Complex(0.0, 0.0), norm);
  out.witness = DiscPoint();
  const int last_ring = closed ? n_radial : n_radial - 1;
  for (int i = 1; i <= last_ring; ++i) {
    const double r = dr * i;
    for (int j = 0; j < n_angular; ++j) {
      const Complex z = std::polar(r, dtheta * j);
      double v = 0.0;
      if (has_taylor) {
        try {
          v = weighted_derivative(f, z, norm);
        } catch (const OutOfValidity&) {
          continue;
        }
      } else {
        v = weighted_derivative(f, z, norm);
      }
      if (v > out.lower) {
        out.lower = v;
        out.witness = DiscPoint(z);
      }
    }
  }

  if (!trusted_everywhere) {
    out.upper_method = "unavailable";
    return out;
  }

  if (const auto coeffs = polynomial_coefficients(f)) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 1; k < coeffs->size(); ++k) {
      const double a = vector_norm((*coeffs)[k], norm);
      m1 += k * a * std::pow(extent, static_cast<double>(k) - 1.0);
      if (k >= 2) m2 += k * (k - 1.0) * a * std::pow(extent, static_cast<double>(k) - 2.0);
    }
    const double lipschitz = 2.0 * extent * m1 + m2;
    const double h = (closed ? dr / 2.0 : dr) + extent * dtheta / 2.0;
    out.upper = out.lower + h * lipschitz;
    out.upper_method = "grid+lipschitz";
  }
  if (grid.cap >= 1.0) {
    if (const auto b = structural_seminorm_bound(f, norm); b && *b < out.upper) {
      out.upper = *b;
      out.upper_method = "structural";
    }
  }
  if (out.upper < out.lower) out.upper = out.lower;
  return out;
}

bool TestFamily::add(HoloExpr g, double certificate, std::string provenance) {
  if (g.dimension() != 1) throw InvalidArgument("family members must be scalar");
  if (std::abs(g.scalar_value_at(Complex(0.0, 0.0))) > 1e-12) {
    throw InvalidArgument("family member is not normalized: g(0) != 0");
  }
  if (!(certificate >= 0.0) || certificate > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "family certificate " << certificate << " exceeds 1 (member '" << provenance << "')";
    throw CertificationFailure(os.str());
  }
  HoloExpr canonical = simplify(g);
  for (const auto& m : members_) {
    if (approx_equal(m.expr, canonical)) return false;
  }
  members_.push_back(FamilyMember{std::move(canonical), certificate, std::move(provenance)});
  return true;
}

void TestFamily::append(const TestFamily& other) {
  for (const auto& m : other.members()) add(m.expr, m.certificate, m.provenance);
}

TestFamily TestFamily::unchecked(std::vector<FamilyMember> members) {
  TestFamily f;
  f.members_ = std::move(members);
  return f;
}

namespace {

std::string point_tag(DiscPoint a) {
  std::ostringstream os;
  os.precision(6);
  os << "(" << a.value().real() << "," << a.value().imag() << ")";
  return os.str();
}

HoloExpr phase_convex_member(const std::vector<DiscPoint>& centers, const std::vector<double>& weights,
                             const std::vector<Complex>& phases) {
  std::vector<HoloExpr> terms;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (weights[k] == 0.0) continue;
    terms.push_back(HoloExpr::scale(weights[k] * phases[k], HoloExpr::extremal(centers[k])));
  }
  if (terms.size() == 1) return terms.front();
  return HoloExpr::sum(std::move(terms));
}

}  // namespace

TestFamily make_family(const FamilySpec& spec) {
  if (spec.extremal_grid.empty() && !spec.phase_convex && !spec.polynomials) {
    throw InvalidArgument("family spec is empty");
  }
  TestFamily family;
  for (const auto& a : spec.extremal_grid) family.add(HoloExpr::extremal(a), 1.0, "extremal" + point_tag(a));

  if (spec.phase_convex) {
    const auto& pc = *spec.phase_convex;
    const auto& centers = pc.centers.empty() ? spec.extremal_grid : pc.centers;
    for (const auto& [weights, phases] : pc.explicit_combinations) {
      if (weights.size() != centers.size() || phases.size() != centers.size()) {
        throw InvalidArgument("phase-convex combination size differs from the number of centers");
      }
      double total = 0.0;
      for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] < 0.0) throw InvalidArgument("phase-convex weights must be nonnegative");
        if (std::abs(std::abs(phases[k]) - 1.0) > 1e-12) throw InvalidArgument("phases must be unimodular");
        total += weights[k];
      }
      if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("phase-convex weights must sum to 1");
      family.add(phase_convex_member(centers, weights, phases), total, "phase-convex");
    }
    if (pc.random_combinations > 0) {
      if (centers.size() < 2) throw InvalidArgument("random phase-convex members need at least two centers");
      std::mt19937_64 rng(pc.seed);
      std::exponential_distribution<double> expo(1.0);
      std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
      const std::size_t terms = std::clamp<std::size_t>(pc.terms, 2, centers.size());
      for (std::size_t c = 0; c < pc.random_combinations; ++c) {
        std::vector<std::size_t> idx(centers.size());
        for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<DiscPoint> chosen;
        std::vector<double> weights;
        std::vector<Complex> phases;
        double total = 0.0;
        for (std::size_t k = 0; k < terms; ++k) {
          chosen.push_back(centers[idx[k]]);
          weights.push_back(expo(rng));
          phases.push_back(std::polar(1.0, angle(rng)));
          total += weights.back();
        }
        double certificate = 0.0;
        for (auto& w : weights) {
          w /= total;
          certificate += w;
        }
        family.add(phase_convex_member(chosen, weights, phases), certificate, "phase-convex-random");
      }
    }
  }

  if (spec.polynomials) {
    const auto& ps = *spec.polynomials;
    if (ps.degree < 1) throw InvalidArgument("normalized polynomials need degree >= 1");
    std::mt19937_64 rng(ps.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t c = 0; c < ps.count; ++c) {
      HoloExpr p = HoloExpr::monomial(ps.degree);
      if (c > 0) {
        std::vector<Complex> coeffs(static_cast<std::size_t>(ps.degree) + 1, Complex(0.0, 0.0));
        for (int k = 1; k <= ps.degree; ++k) coeffs[k] = Complex(gauss(rng), gauss(rng));
        std::vector<HoloExpr> terms;
        for (int k = 1; k <= ps.degree; ++k) terms.push_back(HoloExpr::scale(coeffs[k], HoloExpr::monomial(k)));
        p = HoloExpr::sum(std::move(terms));
      }
      const CertBracket b = bloch_seminorm_bracket(p, GridSpec{128, 1.0});
      if (!b.has_upper() || !(b.upper > 0.0)) {
        throw CertificationFailure("polynomial family member has no finite positive seminorm certificate");
      }
      const HoloExpr scaled = HoloExpr::scale(Complex(1.0 / b.upper, 0.0), p);
      // b.upper certifies p_B(p), so the scaled member sits in the unit ball.
      const double certificate = std::min(1.0, structural_seminorm_bound(scaled).value_or(1.0));
      family.add(scaled, certificate, "polynomial(" + b.upper_method + ")");
    }
  }
  return family;
}

TestFamily default_family(const std::vector<DiscPoint>& sample_points, std::uint64_t seed) {
  FamilySpec spec;
  spec.extremal_grid = sample_disc(SampleScheme::pseudo_hyperbolic, 64, seed);
  PhaseConvexSpec pc;
  pc.random_combinations = 64;
  pc.seed = seed + 1;
  spec.phase_convex = pc;
  TestFamily family = make_family(spec);
  for (const auto& z : sample_points) family.add(HoloExpr::extremal(z), 1.0, "extremal" + point_tag(z));
  return family;
}

TestFamily family_mobius_closure(const TestFamily& family, const MobiusMap& phi) {
  TestFamily out = family;
  for (const auto& m : family.members()) {
    HoloExpr moved = simplify(normalize_origin(compose_mobius(m.expr, phi)));
    out.add(std::move(moved), m.certificate, "mobius[" + m.provenance + "]");
  }
  return out;
}

std::vector<FamilyViolation> validate_family(const TestFamily& family, const std::vector<DiscPoint>& points,
                                             double tol) {
  std::vector<FamilyViolation> out;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& m = family[k];
    if (m.certificate > 1.0 + 1e-12) {
      out.push_back({k, DiscPoint(), m.certificate, m.certificate});
      continue;
    }
    for (const auto& z : points) {
      const double v = z.weight() * std::abs(m.expr.scalar_derivative_at(z.value()));
      if (v > m.certificate + tol) out.push_back({k, z, v, m.certificate});
    }
  }
  return out;
}

}  // namespace bloch
