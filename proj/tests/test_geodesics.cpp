#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torusflow/errors.hpp"
#include "torusflow/geodesics.hpp"
#include "torusflow/samplers.hpp"
#include "torusflow/system.hpp"

using namespace torusflow;

TEST_CASE("flat metric geodesics are straight lines with exact invariants") {
  AnalyticSampler flat = flat_sampler(3);
  double phi0 = 0.7, x0 = 0.25;
  Trajectory traj = integrate_geodesic(flat, 0.0, x0, phi0, 10.0, 1e-3);
  REQUIRE(!traj.samples.empty());
  CHECK(!traj.clipped);

  DriftStats d = invariant_drift(traj);
  CHECK(d.maxH <= 1e-12);
  CHECK(d.maxF <= 1e-12);

  const TrajectorySample& last = traj.samples.back();
  CHECK(last.tau == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(last.x == doctest::Approx(x0 + std::sin(phi0) * 10.0).epsilon(1e-10));
  CHECK(last.t == doctest::Approx(std::cos(phi0) * 10.0).epsilon(1e-10));

  double f_expect = std::cos(phi0) * std::sin(phi0) * std::sin(phi0) +
                    std::sin(phi0) * std::sin(phi0) * std::sin(phi0);
  for (const TrajectorySample& s : traj.samples) CHECK(std::abs(s.F - f_expect) <= 1e-12);
}

TEST_CASE("flat metric reduced chart matches the line too") {
  AnalyticSampler flat = flat_sampler(3);
  double p0 = 0.6, x0 = 0.1;
  Trajectory traj = integrate_reduced(flat, 0.0, x0, p0, 2.0, 1e-3);
  REQUIRE(!traj.samples.empty());
  CHECK(!traj.clipped);
  DriftStats d = invariant_drift(traj);
  CHECK(d.maxH <= 1e-12);
  CHECK(d.maxF <= 1e-12);
  const TrajectorySample& last = traj.samples.back();
  double slope = p0 / std::sqrt(1.0 - p0 * p0);
  CHECK(last.t == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(last.x == doctest::Approx(x0 + slope * 2.0).epsilon(1e-10));
}

TEST_CASE("time-independent metric conserves the vertical momentum exactly") {
  AnalyticSampler st = stationary_sampler(3, 0.1);
  Trajectory traj = integrate_geodesic(st, 0.0, 0.3, 0.7, 5.0, 1e-3);
  REQUIRE(traj.samples.size() > 100);
  CHECK(!traj.clipped);
  double p1_0 = traj.samples.front().p1;
  for (const TrajectorySample& s : traj.samples) CHECK(s.p1 == p1_0);
  DriftStats d = invariant_drift(traj);
  CHECK(d.maxH <= 1e-8); // integrator accuracy; H is not structurally exact here
}

TEST_CASE("full and reduced charts agree on a wavy stationary metric") {
  AnalyticSampler st = stationary_sampler(3, 0.1);
  double x0 = 0.3, phi0 = 0.7;
  Trajectory full = integrate_geodesic(st, 0.0, x0, phi0, 3.0, 1e-3);
  REQUIRE(!full.clipped);

  double p0 = std::sin(phi0);
  double t_target = 1.0;
  Trajectory red = integrate_reduced(st, 0.0, x0, p0, t_target, 1e-3);
  REQUIRE(!red.clipped);
  CHECK(red.samples.back().t == doctest::Approx(t_target).epsilon(1e-12));

  // interpolate the full trajectory, parameterized by tau, to t = t_target
  double x_full = 0.0;
  bool found = false;
  for (size_t i = 1; i < full.samples.size(); ++i) {
    const TrajectorySample& a = full.samples[i - 1];
    const TrajectorySample& b = full.samples[i];
    if (a.t <= t_target && t_target <= b.t) {
      double w = (t_target - a.t) / (b.t - a.t);
      x_full = a.x + w * (b.x - a.x);
      found = true;
      break;
    }
  }
  REQUIRE(found);
  CHECK(std::abs(x_full - red.samples.back().x) <= 1e-5);
}

TEST_CASE("leaving the sampled strip clips the trajectory") {
  AnalyticSampler flat = flat_sampler(3, 0.0, 0.5);
  Trajectory traj = integrate_geodesic(flat, 0.0, 0.0, 0.2, 2.0, 1e-3);
  CHECK(traj.clipped);
  REQUIRE(!traj.samples.empty());
  CHECK(traj.samples.back().t <= 0.5 + 1e-9);
  CHECK(traj.samples.back().tau < 1.0);
  DriftStats d = invariant_drift(traj);
  CHECK(d.clipped);
}

TEST_CASE("reduced chart clips when the geodesic turns vertical") {
  // strong metric gradient pushes p across +-1
  AnalyticSampler st = stationary_sampler(3, 0.5);
  Trajectory traj = integrate_reduced(st, 0.0, 0.05, 0.999, 5.0, 1e-3);
  if (traj.clipped) {
    for (const TrajectorySample& s : traj.samples) CHECK(std::abs(s.p2) < 1.0);
  } else {
    // if it survived, momentum must have stayed inside the chart
    CHECK(std::abs(traj.samples.back().p2) < 1.0);
  }
}

TEST_CASE("geodesic parameter validation") {
  AnalyticSampler flat = flat_sampler(3, 0.0, 1.0);
  CHECK_THROWS_AS(integrate_geodesic(flat, 0.0, 0.0, 0.5, 1.0, -1e-3), Error);
  CHECK_THROWS_AS(integrate_geodesic(flat, 0.0, 0.0, 0.5, 0.0, 1e-3), Error);
  CHECK_THROWS_AS(integrate_geodesic(flat, 2.0, 0.0, 0.5, 1.0, 1e-3), Error); // off-strip start
  CHECK_THROWS_AS(integrate_reduced(flat, 0.0, 0.0, 1.0, 1.0, 1e-3), Error);  // vertical start
  CHECK_THROWS_AS(integrate_reduced(flat, 0.0, 0.0, 0.5, 2.0, 1e-3), Error);  // window off strip
  CHECK_THROWS_AS(stationary_sampler(3, 1.5), Error);                         // g would vanish
}

TEST_CASE("perturbed sampler changes one field and its x-derivative only") {
  AnalyticSampler st = stationary_sampler(3, 0.1);
  PerturbedSampler pert(st, 2, 0.01, 1);
  FieldSample a = st.eval(0.0, 0.3);
  FieldSample b = pert.eval(0.0, 0.3);
  CHECK(b.a[0] == a.a[0]);
  CHECK(b.a[1] == a.a[1]);
  double twopi = 2.0 * M_PI;
  CHECK(b.a[2] == doctest::Approx(a.a[2] + 0.01 * std::sin(twopi * 0.3)).epsilon(1e-14));
  CHECK(b.a_x[2] == doctest::Approx(a.a_x[2] + 0.01 * twopi * std::cos(twopi * 0.3)).epsilon(1e-14));
  CHECK(b.a_t[2] == a.a_t[2]);
}

TEST_CASE("drift statistics summarize deviations correctly") {
  Trajectory traj;
  TrajectorySample s;
  s.H = 0.5;
  s.F = 1.0;
  traj.samples.push_back(s);
  s.H = 0.5 + 3e-4;
  s.F = 1.0 - 4e-4;
  traj.samples.push_back(s);
  DriftStats d = invariant_drift(traj);
  CHECK(d.maxH == doctest::Approx(3e-4).epsilon(1e-12));
  CHECK(d.maxF == doctest::Approx(4e-4).epsilon(1e-12));
  CHECK(d.rmsH == doctest::Approx(std::sqrt(9e-8 / 2.0)).epsilon(1e-12));
  CHECK(d.rmsF == doctest::Approx(std::sqrt(16e-8 / 2.0)).epsilon(1e-12));
  CHECK(!d.clipped);
}
