#include "torusflow/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "torusflow/errors.hpp"

namespace torusflow {

AnalyticSampler::AnalyticSampler(int n, double period, double t0, double t1)
    : n_(n), period_(period), t0_(t0), t1_(t1), v_(n), vt_(n), vx_(n) {
  if (n < 2) fail(errc::invalid_state, "sampler needs degree n >= 2");
  if (period <= 0.0) fail(errc::invalid_state, "sampler period must be positive");
  auto zero = [](double, double) { return 0.0; };
  for (int k = 0; k < n; ++k) {
    v_[k] = zero;
    vt_[k] = zero;
    vx_[k] = zero;
  }
}

void AnalyticSampler::set_field(int k, Fn v, Fn vt, Fn vx) {
  if (k < 0 || k >= n_) fail(errc::arity_error, "sampler field index out of range");
  v_[k] = std::move(v);
  vt_[k] = std::move(vt);
  vx_[k] = std::move(vx);
}

FieldSample AnalyticSampler::eval(double t, double x) const {
  FieldSample s;
  s.a.resize(n_);
  s.a_t.resize(n_);
  s.a_x.resize(n_);
  for (int k = 0; k < n_; ++k) {
    s.a[k] = v_[k](t, x);
    s.a_t[k] = vt_[k](t, x);
    s.a_x[k] = vx_[k](t, x);
  }
  return s;
}

AnalyticSampler flat_sampler(int n, double t0, double t1) {
  AnalyticSampler s(n, 1.0, t0, t1);
  s.set_field(n - 1, [](double, double) { return 1.0; },
              [](double, double) { return 0.0; }, [](double, double) { return 0.0; });
  return s;
}

AnalyticSampler stationary_sampler(int n, double beta, double L, double t0, double t1) {
  if (std::abs(beta) >= 1.0)
    fail(errc::invalid_state, "stationary metric needs |beta| < 1 to stay positive");
  AnalyticSampler s(n, L, t0, t1);
  double w = 2.0 * M_PI / L;
  s.set_field(n - 1,
              [beta, w](double, double x) { return 1.0 + beta * std::sin(w * x); },
              [](double, double) { return 0.0; },
              [beta, w](double, double x) { return beta * w * std::cos(w * x); });
  return s;
}

namespace {

// Periodic Catmull-Rom through four neighbouring cell values; returns value
// and d/ds at local coordinate s in [0, 1] between p1 and p2.
void catmull_rom(double p0, double p1, double p2, double p3, double s, double& val,
                 double& deriv) {
  double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
  double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
  double c = -0.5 * p0 + 0.5 * p2;
  double d = p1;
  val = ((a * s + b) * s + c) * s + d;
  deriv = (3.0 * a * s + 2.0 * b) * s + c;
}

struct XEval {
  std::vector<double> value;
  std::vector<double> deriv;
};

XEval eval_in_x(const FieldGrid& g, double x, XInterp xi) {
  int n = g.n();
  double L = g.length;
  double xr = x - L * std::floor(x / L);
  double s = xr / g.dx() - 0.5;
  int j0 = static_cast<int>(std::floor(s));
  double w = s - j0;

  XEval out;
  out.value.resize(n);
  out.deriv.resize(n);
  if (xi == XInterp::linear) {
    const FieldPoint& a = g.cell(j0);
    const FieldPoint& b = g.cell(j0 + 1);
    for (int k = 0; k < n; ++k) {
      out.value[k] = (1.0 - w) * a[k] + w * b[k];
      out.deriv[k] = (b[k] - a[k]) / g.dx();
    }
  } else {
    const FieldPoint& p0 = g.cell(j0 - 1);
    const FieldPoint& p1 = g.cell(j0);
    const FieldPoint& p2 = g.cell(j0 + 1);
    const FieldPoint& p3 = g.cell(j0 + 2);
    for (int k = 0; k < n; ++k) {
      double v, dv;
      catmull_rom(p0[k], p1[k], p2[k], p3[k], w, v, dv);
      out.value[k] = v;
      out.deriv[k] = dv / g.dx();
    }
  }
  return out;
}

} // namespace

HistorySampler::HistorySampler(const EvolutionHistory& history, XInterp xi)
    : hist_(history), xi_(xi) {
  if (hist_.snapshots.size() < 2)
    fail(errc::invalid_state, "history sampler needs at least two snapshots");
  for (size_t i = 1; i < hist_.snapshots.size(); ++i)
    if (hist_.snapshots[i].time <= hist_.snapshots[i - 1].time)
      fail(errc::invalid_state, "history snapshots must have increasing times");
}

int HistorySampler::n() const { return hist_.snapshots.front().n(); }
double HistorySampler::period() const { return hist_.snapshots.front().length; }
double HistorySampler::t_begin() const { return hist_.snapshots.front().time; }
double HistorySampler::t_end() const { return hist_.snapshots.back().time; }

FieldSample HistorySampler::eval(double t, double x) const {
  const std::vector<FieldGrid>& snaps = hist_.snapshots;
  double tc = std::clamp(t, t_begin(), t_end());
  size_t seg = 0;
  while (seg + 2 < snaps.size() && snaps[seg + 1].time <= tc) ++seg;
  const FieldGrid& g0 = snaps[seg];
  const FieldGrid& g1 = snaps[seg + 1];
  double dtseg = g1.time - g0.time;
  double w = std::clamp((tc - g0.time) / dtseg, 0.0, 1.0);

  XEval e0 = eval_in_x(g0, x, xi_);
  XEval e1 = eval_in_x(g1, x, xi_);

  int nn = n();
  FieldSample s;
  s.a.resize(nn);
  s.a_t.resize(nn);
  s.a_x.resize(nn);
  for (int k = 0; k < nn; ++k) {
    s.a[k] = (1.0 - w) * e0.value[k] + w * e1.value[k];
    s.a_t[k] = (e1.value[k] - e0.value[k]) / dtseg;
    s.a_x[k] = (1.0 - w) * e0.deriv[k] + w * e1.deriv[k];
  }
  return s;
}

PerturbedSampler::PerturbedSampler(const FieldSampler& base, int field, double amplitude,
                                   int mode)
    : base_(base), field_(field), amplitude_(amplitude), mode_(mode) {
  if (field < 0 || field >= base.n())
    fail(errc::arity_error, "perturbed field index out of range");
}

FieldSample PerturbedSampler::eval(double t, double x) const {
  FieldSample s = base_.eval(t, x);
  double w = 2.0 * M_PI * mode_ / period();
  s.a[field_] += amplitude_ * std::sin(w * x);
  s.a_x[field_] += amplitude_ * w * std::cos(w * x);
  return s;
}

} // namespace torusflow
