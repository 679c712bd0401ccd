#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "torusflow/evolution.hpp"
#include "torusflow/field.hpp"

namespace torusflow {

struct FieldSample {
  std::vector<double> a;   // coefficients a_0..a_{n-1}
  std::vector<double> a_t; // time partials
  std::vector<double> a_x; // space partials

  double g() const { return a.back(); }
  double g_t() const { return a_t.back(); }
  double g_x() const { return a_x.back(); }
};

// Coefficient field on a time strip [t_begin, t_end] x (x periodic), with
// partial derivatives: the metric g = a_{n-1} plus all lower coefficients.
class FieldSampler {
public:
  virtual ~FieldSampler() = default;
  virtual int n() const = 0;
  virtual double period() const = 0;
  virtual double t_begin() const = 0;
  virtual double t_end() const = 0;
  virtual FieldSample eval(double t, double x) const = 0;

  bool covers(double t) const { return t >= t_begin() && t <= t_end(); }
};

// Closed-form field a_k(t, x) given per-coefficient value/partial callbacks.
class AnalyticSampler : public FieldSampler {
public:
  using Fn = std::function<double(double, double)>;

  AnalyticSampler(int n, double period, double t0, double t1);

  // Field k gets value v(t,x) with partials vt, vx.
  void set_field(int k, Fn v, Fn vt, Fn vx);

  int n() const override { return n_; }
  double period() const override { return period_; }
  double t_begin() const override { return t0_; }
  double t_end() const override { return t1_; }
  FieldSample eval(double t, double x) const override;

private:
  int n_;
  double period_, t0_, t1_;
  std::vector<Fn> v_, vt_, vx_;
};

// Flat metric: a = (0, ..., 0, 1) everywhere.
AnalyticSampler flat_sampler(int n, double t0 = -1e9, double t1 = 1e9);

// Time-independent metric g(x) = 1 + beta sin(2 pi x / L), other fields 0.
AnalyticSampler stationary_sampler(int n, double beta, double L = 1.0,
                                   double t0 = -1e9, double t1 = 1e9);

enum class XInterp { linear, cubic };

// Interpolates an evolution history: linear in t between snapshots, linear
// or periodic cubic (Catmull-Rom) in x.  Time partials are the snapshot
// difference quotients; space partials differentiate the interpolant.
class HistorySampler : public FieldSampler {
public:
  HistorySampler(const EvolutionHistory& history, XInterp xi = XInterp::linear);

  int n() const override;
  double period() const override;
  double t_begin() const override;
  double t_end() const override;
  FieldSample eval(double t, double x) const override;

private:
  const EvolutionHistory& hist_;
  XInterp xi_;
};

// Adds amplitude * sin(2 pi mode x / L) to one coefficient field of an
// existing sampler (negative-control fields that solve nothing).
class PerturbedSampler : public FieldSampler {
public:
  PerturbedSampler(const FieldSampler& base, int field, double amplitude, int mode);

  int n() const override { return base_.n(); }
  double period() const override { return base_.period(); }
  double t_begin() const override { return base_.t_begin(); }
  double t_end() const override { return base_.t_end(); }
  FieldSample eval(double t, double x) const override;

private:
  const FieldSampler& base_;
  int field_;
  double amplitude_;
  int mode_;
};

} // namespace torusflow
