#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bloch/bloch_norms.hpp"
#include "bloch/holo_expr.hpp"

namespace bloch {

struct Atom {
  Complex lambda{1.0, 0.0};
  DiscPoint z{};
  std::vector<Complex> x;
};

/// Formal sum sum_i lambda_i gamma_{z_i} (x) x_i with x_i in (C^d, norm).
/// Two molecules are equivalent when they pair equally with tensor probes;
/// field equality is not meaningful.
class Molecule {
public:
  /// Zero molecule in dimension 1.
  Molecule() = default;
  /// Throws DimensionMismatch when an atom does not have `dimension` components.
  Molecule(std::vector<Atom> atoms, std::size_t dimension, NormKind norm = NormKind::euclidean);
  /// Dimension taken from the first atom; throws InvalidArgument when empty.
  explicit Molecule(std::vector<Atom> atoms, NormKind norm = NormKind::euclidean);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  std::size_t dimension() const noexcept { return dimension_; }
  NormKind norm() const noexcept { return norm_; }

  Molecule scaled(Complex c) const;
  /// Atom-list concatenation, representing the sum of the functionals.
  friend Molecule operator+(const Molecule& a, const Molecule& b);

private:
  std::vector<Atom> atoms_;
  std::size_t dimension_ = 1;
  NormKind norm_ = NormKind::euclidean;
};

/// A rewritten atom list for the same functional, with the moves applied.
struct Representation {
  Molecule molecule;
  std::vector<std::string> moves;
};

/// sum_i lambda_i <f'(z_i), x_i>, bilinear (no conjugation).
Complex pairing(const Molecule& gamma, const HoloExpr& f);

/// Hoelder-exponent conjugate: 1 -> inf, inf -> 1.
double conjugate_exponent(double p);

/// ||(|lambda_i| / (1 - |z_i|^2))_i||_{p*} * ||(||x_i||)_i||_p for this atom list.
double representation_value(const Molecule& gamma, double p);

/// Atoms sharing a point collapse to gamma_z (x) sum_i lambda_i x_i.
Representation merge_atoms(const Molecule& gamma);
/// Atoms with lambda = 0 or x = 0 are removed.
Representation cancel_atoms(const Molecule& gamma);
/// Moves |lambda_i| between scalar and vector so the closed form equals
/// sum_i |lambda_i| ||x_i|| / (1 - |z_i|^2), its minimum over rescalings.
Representation rebalance(const Molecule& gamma, double p);
/// Concatenation with each part rescaled by the Young weights, so the closed
/// form of the result is the sum of the closed forms of the parts.
Representation balanced_concatenation(const Molecule& a, const Molecule& b, double p);

/// Best representation found by the local search over the moves above.
Representation best_representation(const Molecule& gamma, double p);

/// Upper bound on the projective norm.
double projective_upper(const Molecule& gamma);
/// Upper bound on the p-Chevet-Saphar norm.
double cs_upper(const Molecule& gamma, double p);

/// Tensor test function g . xs with a certificate p_B(g) <= certificate.
struct Probe {
  HoloExpr g;
  double certificate = 1.0;
  std::vector<Complex> functional;
  std::string provenance;

  HoloExpr as_function() const { return HoloExpr::tensor(g, functional); }
};

/// Every family member against `random_functionals` seeded unit functionals,
/// plus f_{z_i} tensored with a norming functional of x_i for each atom.
std::vector<Probe> default_probes(const Molecule& gamma, const TestFamily& family,
                                  std::size_t random_functionals = 8, std::uint64_t seed = 0);

/// Random extremal tensor probes, used for behavioural equality.
std::vector<Probe> random_probes(std::size_t dimension, NormKind norm, std::size_t count, std::uint64_t seed);

struct LowerBound {
  double value = 0.0;
  std::size_t probe = 0;  // attaining probe, meaningful when value > 0
};

/// max over probes of |<gamma, g . xs>| / (certificate(g) ||xs||_*).
LowerBound cs_lower_dual(const Molecule& gamma, double p, const std::vector<Probe>& probes);

struct Sandwich {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t lower_probe = 0;
  Representation upper_representation;
};

Sandwich sandwich(const Molecule& gamma, double p, const std::vector<Probe>& probes);

/// Pairings of the two molecules against the probes agree within tol.
bool equivalent(const Molecule& a, const Molecule& b, const std::vector<Probe>& probes, double tol = 1e-9);
/// Same, against 20 seeded random probes.
bool equivalent(const Molecule& a, const Molecule& b, std::uint64_t seed = 0, double tol = 1e-9);

struct CrossnormReport {
  /// min over atoms of ||x||/(1-|z|^2) - cs_upper(gamma_z (x) x)
  double atom_margin = 0.0;
  /// certificate ||xs||_* projective_upper(gamma) - |<gamma, g . xs>|
  double duality_margin = 0.0;
  bool pass = false;
};

CrossnormReport crossnorm_check(const Molecule& gamma, const Probe& probe, double p);

}  // namespace bloch
