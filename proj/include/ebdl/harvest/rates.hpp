#pragma once

#include "ebdl/algebra/factor.hpp"

namespace ebdl {

// Fraction of uniform monic degree-d polynomials over f whose irreducible
// factors all have degree <= bound.
inline double splitting_rate(const Fq& f, int d, int bound, u64 samples, u64 seed) {
  Rng rng(seed);
  u64 hit = 0;
  for (u64 i = 0; i < samples; ++i) hit += is_smooth(random_monic(f, d, rng), bound);
  return samples ? double(hit) / double(samples) : 0.0;
}

// Large-q limits for splitting into factors of degree <= 3.
inline double limiting_rate(int d) {
  switch (d) {
    case 4: return 0.75;
    case 6: return 1.0 - (1.0 / 6 + 1.0 / 5 + 1.0 / 4);
    case 7: return 1.0 - (1.0 / 7 + 1.0 / 6 + 1.0 / 5 + 1.0 / 4);
    case 8: return 1.0 - (1.0 / 8 + 1.0 / 7 + 1.0 / 6 + 1.0 / 5 + 3.0 / 16 + 1.0 / 32);
    default: return -1.0;
  }
}

}  // namespace ebdl
