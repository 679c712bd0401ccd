#pragma once

#include <cstdint>
#include <random>

#include "torusflow/field.hpp"

namespace torusflow {

// Deterministic uniform sampler.  The raw mt19937_64 stream is mapped to
// doubles explicitly so the produced sequences do not depend on the standard
// library's distribution implementations.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double uniform01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int uniform_int(int lo, int hi) { // inclusive bounds
    return lo + static_cast<int>(uniform01() * (hi - lo + 1.0));
  }
};

// Validation-suite distribution: a_k uniform in [-2,2] for k < n-1,
// g uniform in [0.5,2].
FieldPoint sample_point(Rng& rng, int n);

// Rejection sampling of sample_point until the spectrum is strictly
// hyperbolic with min adjacent gap >= rel_margin * (1 + max |lambda|).
FieldPoint sample_hyperbolic_point(Rng& rng, int n, double rel_margin);

// Certification distribution for the compatibility-residual suites: the
// metric coefficient dominates the lower coefficients (a_k in [-2,2],
// g in [3,6] for n <= 3 and [6,12] above) and the spectrum is filtered to a
// relative separation margin of 0.30.  In this regime the truncation
// constant of the nested finite differences stays small enough that the
// residual is resolvable at moderate steps (max ~2e-5 at h = 1e-3 over
// 100-point scans, decaying by a factor 4 per halving).
FieldPoint sample_richness_point(Rng& rng, int n);

} // namespace torusflow
