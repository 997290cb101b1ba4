#pragma once

#include <random>

#include "relaysel/belief.hpp"
#include "relaysel/policy.hpp"
#include "relaysel/rng.hpp"

namespace relaysel::testing {

inline double draw(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random model with q > s and k > g, kept away from exact 0/1.
inline ChannelModel random_model(Rng& rng) {
  for (;;) {
    double q = draw(rng, 0.01, 0.99), s = draw(rng, 0.01, 0.99);
    double k = draw(rng, 0.01, 0.99), g = draw(rng, 0.01, 0.99);
    if (q < s) std::swap(q, s);
    if (k < g) std::swap(k, g);
    if (q - s > 1e-3 && k - g > 1e-3) return {q, s, k, g};
  }
}

/// Random cost with a probe cost below the peak stop cost.
inline CostModel random_cost(Rng& rng) {
  const double d1 = draw(rng, 0.5, 50.0);
  const double d2 = draw(rng, 0.5, 50.0);
  const double peak = d1 * d2 / (d1 + d2);
  return {d1, d2, draw(rng, 1e-3, 0.5) * peak};
}

}  // namespace relaysel::testing
