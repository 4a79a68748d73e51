#pragma once

#include <cstdint>
#include <vector>

#include "bloch/disc.hpp"

namespace bloch {

enum class SampleScheme { polar_grid, pseudo_hyperbolic };

inline constexpr double kDefaultRadiusCap = 0.95;

/// n distinct disc points with |z| <= r_cap.
///
/// polar_grid is a sunflower layout whose first point is the origin and does
/// not depend on the seed. pseudo_hyperbolic draws uniform angles and
/// pseudo-hyperbolic radii tanh(t), t uniform on [0, atanh(r_cap)], from a
/// seeded mt19937_64.
std::vector<DiscPoint> sample_disc(SampleScheme scheme, std::size_t n, std::uint64_t seed,
                                   double r_cap = kDefaultRadiusCap);

}  // namespace bloch
