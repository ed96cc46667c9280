#pragma once

// Shared fixtures: the two-outcome running instance R and seeded random
// instances.

#include <cstdint>

#include "credal/core.hpp"
#include "credal/generators.hpp"

namespace credal::testing {

// Omega = {w1, w2}, one assessment P((1,0)) = 0.3, so the credal set is
// {p : p1 in [0.3, 1]}.
inline LowerPrevision instance_r() { return LowerPrevision(PossibilitySpace(2), {{Gamble{1.0, 0.0}, 0.3}}); }

// E = 0, 0.5, 0.2 and Ebar = 0.7, 0.5, 0.2 under R.
inline GambleSet set_r() { return GambleSet(PossibilitySpace(2), {Gamble{0.0, 1.0}, Gamble{0.5, 0.5}, Gamble{0.2, 0.2}}); }

struct RandomInstance {
  LowerPrevision P;
  GambleSet K;
};

inline RandomInstance random_instance(std::uint64_t seed, std::uint64_t instance, std::size_t n_omega,
                                      std::size_t dom, std::size_t k) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.instance = instance;
  cfg.n_omega = n_omega;
  cfg.dom_size = dom;
  cfg.k = k;
  return {gen_lower_prevision(cfg), gen_gamble_set(cfg)};
}

}  // namespace credal::testing
