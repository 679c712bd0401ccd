#pragma once

#include <vector>

#include "torusflow/samplers.hpp"

namespace torusflow {

struct TrajectorySample {
  double tau = 0.0; // arclength parameter of the full flow
  double t = 0.0;
  double x = 0.0;   // unwrapped
  double p1 = 0.0;
  double p2 = 0.0;
  double H = 0.0;   // (p1/g)^2/2 + p2^2/2
  double F = 0.0;   // integral in the momentum chart at the sampled field
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool clipped = false; // left the sampler's strip (or reduced |p| -> 1)
};

// Hamiltonian flow of H = ((p1/g)^2 + p2^2)/2 for the metric g^2 dt^2 + dx^2:
//   t' = p1/g^2,  x' = p2,  p1' = p1^2 g_t / g^3,  p2' = p1^2 g_x / g^3,
// integrated with classical fixed-step 4th-order Runge-Kutta.  The start is
// placed on the energy level H = 1/2 via p1 = g cos(phi0), p2 = sin(phi0).
// The trajectory is clipped where t leaves the sampler strip.
Trajectory integrate_geodesic(const FieldSampler& field, double t0, double x0, double phi0,
                              double tau_span, double dtau);

// Graph form of the same flow with t as the parameter:
//   x' = g p / sqrt(1-p^2),  p' = g_x sqrt(1-p^2),
// valid while |p| < 1 (non-vertical).  Samples are mapped back to the full
// chart via p2 = p, p1 = g sqrt(1-p^2), and tau accumulates g/sqrt(1-p^2).
Trajectory integrate_reduced(const FieldSampler& field, double t0, double x0, double p0,
                             double t_span, double dt);

struct DriftStats {
  double maxH = 0.0, rmsH = 0.0; // deviation of H from 1/2
  double maxF = 0.0, rmsF = 0.0; // deviation of F from its initial value
  bool clipped = false;
};

DriftStats invariant_drift(const Trajectory& traj);

} // namespace torusflow
