#include "torusflow/geodesics.hpp"

#include <cmath>

#include "torusflow/errors.hpp"
#include "torusflow/system.hpp"

namespace torusflow {

namespace {

struct FullState {
  double t, x, p1, p2;
};

FullState full_rhs(const FieldSampler& field, const FullState& s) {
  FieldSample f = field.eval(s.t, s.x);
  double g = f.g();
  if (g <= 0.0) fail(errc::invalid_state, "metric coefficient g <= 0 along trajectory");
  double g3 = g * g * g;
  FullState d;
  d.t = s.p1 / (g * g);
  d.x = s.p2;
  d.p1 = s.p1 * s.p1 * f.g_t() / g3;
  d.p2 = s.p1 * s.p1 * f.g_x() / g3;
  return d;
}

TrajectorySample record_full(const FieldSampler& field, double tau, const FullState& s) {
  FieldSample f = field.eval(s.t, s.x);
  double g = f.g();
  TrajectorySample out;
  out.tau = tau;
  out.t = s.t;
  out.x = s.x;
  out.p1 = s.p1;
  out.p2 = s.p2;
  out.H = 0.5 * ((s.p1 / g) * (s.p1 / g) + s.p2 * s.p2);
  out.F = eval_integral_momentum(f.a, s.p1, s.p2);
  return out;
}

} // namespace

Trajectory integrate_geodesic(const FieldSampler& field, double t0, double x0, double phi0,
                              double tau_span, double dtau) {
  if (dtau <= 0.0) fail(errc::config_error, "step dtau must be positive");
  if (tau_span <= 0.0) fail(errc::config_error, "tau_span must be positive");
  if (!field.covers(t0)) fail(errc::range_error, "start time outside the sampled strip");

  FieldSample f0 = field.eval(t0, x0);
  FullState s{t0, x0, f0.g() * std::cos(phi0), std::sin(phi0)};

  Trajectory traj;
  long steps = static_cast<long>(std::ceil(tau_span / dtau - 1e-12));
  traj.samples.reserve(steps + 1);
  traj.samples.push_back(record_full(field, 0.0, s));

  double tau = 0.0;
  for (long i = 0; i < steps; ++i) {
    double h = std::min(dtau, tau_span - tau);
    FullState k1 = full_rhs(field, s);
    FullState m2{s.t + 0.5 * h * k1.t, s.x + 0.5 * h * k1.x, s.p1 + 0.5 * h * k1.p1,
                 s.p2 + 0.5 * h * k1.p2};
    FullState k2 = full_rhs(field, m2);
    FullState m3{s.t + 0.5 * h * k2.t, s.x + 0.5 * h * k2.x, s.p1 + 0.5 * h * k2.p1,
                 s.p2 + 0.5 * h * k2.p2};
    FullState k3 = full_rhs(field, m3);
    FullState m4{s.t + h * k3.t, s.x + h * k3.x, s.p1 + h * k3.p1, s.p2 + h * k3.p2};
    FullState k4 = full_rhs(field, m4);
    s.t += h / 6.0 * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t);
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.p1 += h / 6.0 * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1);
    s.p2 += h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
    tau += h;
    if (!field.covers(s.t)) {
      traj.clipped = true;
      break;
    }
    traj.samples.push_back(record_full(field, tau, s));
  }
  return traj;
}

Trajectory integrate_reduced(const FieldSampler& field, double t0, double x0, double p0,
                             double t_span, double dt) {
  if (dt <= 0.0) fail(errc::config_error, "step dt must be positive");
  if (t_span <= 0.0) fail(errc::config_error, "t_span must be positive");
  if (std::abs(p0) >= 1.0)
    fail(errc::range_error, "reduced chart needs |p| < 1 (non-vertical geodesic)");
  if (!field.covers(t0) || !field.covers(t0 + t_span))
    fail(errc::range_error, "time window outside the sampled strip");

  auto rhs = [&field](double t, double x, double p, double& dx, double& dp) {
    FieldSample f = field.eval(t, x);
    double g = f.g();
    if (g <= 0.0) fail(errc::invalid_state, "metric coefficient g <= 0 along trajectory");
    double root = 1.0 - p * p;
    if (root <= 0.0) return false;
    double sq = std::sqrt(root);
    dx = g * p / sq;
    dp = f.g_x() * sq;
    return true;
  };

  auto record = [&field](double tau, double t, double x, double p) {
    FieldSample f = field.eval(t, x);
    double g = f.g();
    TrajectorySample s;
    s.tau = tau;
    s.t = t;
    s.x = x;
    s.p2 = p;
    s.p1 = g * std::sqrt(std::max(0.0, 1.0 - p * p));
    s.H = 0.5 * ((s.p1 / g) * (s.p1 / g) + p * p);
    s.F = eval_integral_momentum(f.a, s.p1, s.p2);
    return s;
  };

  Trajectory traj;
  long steps = static_cast<long>(std::ceil(t_span / dt - 1e-12));
  traj.samples.reserve(steps + 1);
  double t = t0, x = x0, p = p0, tau = 0.0;
  traj.samples.push_back(record(tau, t, x, p));

  for (long i = 0; i < steps; ++i) {
    double h = std::min(dt, t0 + t_span - t);
    double k1x, k1p, k2x, k2p, k3x, k3p, k4x, k4p;
    bool ok = rhs(t, x, p, k1x, k1p) &&
              rhs(t + 0.5 * h, x + 0.5 * h * k1x, p + 0.5 * h * k1p, k2x, k2p) &&
              rhs(t + 0.5 * h, x + 0.5 * h * k2x, p + 0.5 * h * k2p, k3x, k3p) &&
              rhs(t + h, x + h * k3x, p + h * k3p, k4x, k4p);
    if (!ok) {
      traj.clipped = true;
      break;
    }
    double xn = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    double pn = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (std::abs(pn) >= 1.0) {
      traj.clipped = true;
      break;
    }
    x = xn;
    p = pn;
    t += h;
    FieldSample f = field.eval(t, x);
    tau += h * f.g() / std::sqrt(1.0 - p * p);
    traj.samples.push_back(record(tau, t, x, p));
  }
  return traj;
}

DriftStats invariant_drift(const Trajectory& traj) {
  DriftStats d;
  d.clipped = traj.clipped;
  if (traj.samples.empty()) return d;
  double f0 = traj.samples.front().F;
  double sumH = 0.0, sumF = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    double eh = std::abs(s.H - 0.5);
    double ef = std::abs(s.F - f0);
    d.maxH = std::max(d.maxH, eh);
    d.maxF = std::max(d.maxF, ef);
    sumH += eh * eh;
    sumF += ef * ef;
  }
  d.rmsH = std::sqrt(sumH / traj.samples.size());
  d.rmsF = std::sqrt(sumF / traj.samples.size());
  return d;
}

} // namespace torusflow
