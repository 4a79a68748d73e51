#include "bloch/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "bloch/errors.hpp"

namespace bloch {

std::vector<DiscPoint> sample_disc(SampleScheme scheme, std::size_t n, std::uint64_t seed, double r_cap) {
  if (n == 0) throw InvalidArgument("sample_disc needs n >= 1");
  if (!(r_cap > 0.0 && r_cap < 1.0)) throw InvalidArgument("radius cap must lie in (0, 1)");

  std::vector<DiscPoint> out;
  out.reserve(n);
  if (scheme == SampleScheme::polar_grid) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < n; ++k) {
      const double r = n == 1 ? 0.0 : r_cap * std::sqrt(static_cast<double>(k) / static_cast<double>(n - 1));
      const double t = golden * static_cast<double>(k);
      out.emplace_back(std::polar(r, t));
    }
    return out;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> hyp(0.0, std::atanh(r_cap));
  while (out.size() < n) {
    const double t = hyp(rng);
    const double theta = angle(rng);
    const DiscPoint z(std::polar(std::min(std::tanh(t), r_cap), theta));
    bool fresh = true;
    for (const auto& w : out) {
      if (w == z) {
        fresh = false;
        break;
      }
    }
    if (fresh) out.push_back(z);
  }
  return out;
}

}  // namespace bloch
