#pragma once

#include <cstdint>
#include <vector>

#include "bloch/bloch_norms.hpp"
#include "bloch/holo_expr.hpp"
#include "bloch/molecules.hpp"

namespace bloch {

/// A seeded (f, points, family) triple for the summing checks.
struct SummingInstance {
  HoloExpr f = HoloExpr::monomial(1);
  std::vector<DiscPoint> points;
  TestFamily family;
};

/// 3..8 pseudo-hyperbolic points (|z| <= 0.9), a family of 12 members made
/// of the point extremals plus random extremals, and f a random C^2-valued
/// combination of w, w^2, w^3 and one extremal.
SummingInstance random_summing_instance(std::uint64_t seed);

/// Random normalized C^d-valued polynomial of degree <= 3.
HoloExpr random_vector_function(std::size_t d, std::uint64_t seed);

/// `atoms` atoms with |z| <= 0.9, lambda and x complex Gaussian.
Molecule random_molecule(std::size_t atoms, std::size_t d, NormKind norm, std::uint64_t seed);

MobiusMap random_automorphism(std::uint64_t seed, double max_center = 0.8);

}  // namespace bloch
