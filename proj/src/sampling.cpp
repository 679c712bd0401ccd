#include "torusflow/sampling.hpp"

#include "torusflow/spectral.hpp"

namespace torusflow {

FieldPoint sample_point(Rng& rng, int n) {
  FieldPoint u(n);
  for (int k = 0; k < n - 1; ++k) u[k] = rng.uniform(-2.0, 2.0);
  u[n - 1] = rng.uniform(0.5, 2.0);
  return u;
}

FieldPoint sample_hyperbolic_point(Rng& rng, int n, double rel_margin) {
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    FieldPoint u = sample_point(rng, n);
    Spectrum sp = spectrum(u);
    if (sp.cls != Hyperbolicity::strictly_hyperbolic) continue;
    double scale = 1.0 + std::abs(sp.lambda.back() > -sp.lambda.front() ? sp.lambda.back()
                                                                        : sp.lambda.front());
    if (sp.min_gap >= rel_margin * scale) return u;
  }
  fail(errc::no_convergence, "hyperbolic-point sampler exhausted its attempt budget");
}

FieldPoint sample_richness_point(Rng& rng, int n) {
  double g_lo = n <= 3 ? 3.0 : 6.0;
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    FieldPoint u(n);
    for (int k = 0; k < n - 1; ++k) u[k] = rng.uniform(-2.0, 2.0);
    u[n - 1] = rng.uniform(g_lo, 2.0 * g_lo);
    Spectrum sp = spectrum(u);
    if (sp.cls != Hyperbolicity::strictly_hyperbolic) continue;
    double scale = 1.0 + std::abs(sp.lambda.back() > -sp.lambda.front() ? sp.lambda.back()
                                                                        : sp.lambda.front());
    if (sp.min_gap >= 0.30 * scale) return u;
  }
  fail(errc::no_convergence, "richness-point sampler exhausted its attempt budget");
}

} // namespace torusflow
