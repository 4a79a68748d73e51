#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bloch/holo_expr.hpp"

namespace bloch {

/// Two-sided bound on a seminorm. `lower` is attained at `witness`; `upper`
/// is +inf when no certificate is available.
struct CertBracket {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::string lower_method;
  std::string upper_method;
  DiscPoint witness{};

  bool has_upper() const noexcept { return upper < std::numeric_limits<double>::infinity(); }
  double width() const noexcept { return upper - lower; }
};

/// Polar grid: `resolution` radial steps over [0, cap], 4 * resolution angles.
struct GridSpec {
  int resolution = 512;
  double cap = 1.0;
};

/// f_a, with p_B(f_a) = 1 attained at a.
HoloExpr extremal(DiscPoint a);

/// Exact sup of (1 - r^2) k r^(k-1) over [0, 1).
double monomial_seminorm(int degree);

/// Upper bound on p_B(f) from structural rules (exact for extremal and
/// monomial nodes, invariant under precomposition with automorphisms,
/// subadditive on sums). nullopt for taylor nodes.
std::optional<double> structural_seminorm_bound(const HoloExpr& f, NormKind norm = NormKind::euclidean);

CertBracket bloch_seminorm_bracket(const HoloExpr& f, const GridSpec& grid = {},
                                   NormKind norm = NormKind::euclidean);

struct FamilyMember {
  HoloExpr expr;
  double certificate = 1.0;
  std::string provenance;
};

/// Finite surrogate for the unit ball of the normalized scalar Bloch space.
/// Members are normalized, certified (bound <= 1 + 1e-12) and pairwise
/// distinct after simplification.
class TestFamily {
public:
  TestFamily() = default;

  /// Returns false when an equal member is already present. Throws
  /// CertificationFailure on a certificate above 1 + 1e-12 and
  /// InvalidArgument on a non-scalar or non-normalized member.
  bool add(HoloExpr g, double certificate, std::string provenance);
  void append(const TestFamily& other);

  /// Bypasses every invariant; used to load or inject corrupted data that a
  /// validation pass is expected to reject.
  static TestFamily unchecked(std::vector<FamilyMember> members);

  const std::vector<FamilyMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const FamilyMember& operator[](std::size_t i) const { return members_[i]; }

private:
  std::vector<FamilyMember> members_;
};

struct PhaseConvexSpec {
  /// Base centers; empty means "use the extremal_grid points".
  std::vector<DiscPoint> centers;
  /// Explicit combinations: convex weights and unimodular phases per center.
  std::vector<std::pair<std::vector<double>, std::vector<Complex>>> explicit_combinations;
  std::size_t random_combinations = 0;
  std::size_t terms = 3;
  std::uint64_t seed = 0;
};

struct PolynomialSpec {
  int degree = 2;
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

struct FamilySpec {
  std::vector<DiscPoint> extremal_grid;
  std::optional<PhaseConvexSpec> phase_convex;
  std::optional<PolynomialSpec> polynomials;
};

TestFamily make_family(const FamilySpec& spec);

/// 64 pseudo-hyperbolic extremal centers, 64 random phase-convex members and
/// the extremals of `sample_points`.
TestFamily default_family(const std::vector<DiscPoint>& sample_points, std::uint64_t seed = 0);

/// The family enlarged with normalize_origin(g ∘ phi) for every member g.
TestFamily family_mobius_closure(const TestFamily& family, const MobiusMap& phi);

struct FamilyViolation {
  std::size_t member = 0;
  DiscPoint z{};
  double weighted_derivative = 0.0;
  double certificate = 0.0;
};

/// Checks (1 - |z|^2)|g'(z)| <= certificate + tol at the given points and the
/// certificate ceiling 1 + 1e-12. Empty result means no violation.
std::vector<FamilyViolation> validate_family(const TestFamily& family, const std::vector<DiscPoint>& points,
                                             double tol = 1e-9);

}  // namespace bloch
