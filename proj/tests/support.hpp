#pragma once

#include "rieff/acceptance.hpp"
#include "rieff/state.hpp"

#include <random>

namespace rieff::test {

// Seeded from RIEFF_SEED so failures can be replayed.
inline std::mt19937_64& rng() {
  static std::mt19937_64 g(seed_from_env());
  return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

// Uniform in the triangle with every saturation at least `margin`.
inline State random_state(double margin = 0.0) {
  for (;;) {
    const State u{uniform(0.0, 1.0), uniform(0.0, 1.0)};
    if (u.u1 >= margin && u.u2 >= margin && u.u3() >= margin) return u;
  }
}

}  // namespace rieff::test
