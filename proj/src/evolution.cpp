#include "torusflow/evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "torusflow/claws.hpp"
#include "torusflow/spectral.hpp"
#include "torusflow/system.hpp"

namespace torusflow {

const char* scheme_name(Scheme s) {
  switch (s) {
  case Scheme::upwind_quasilinear: return "upwind-quasilinear";
  case Scheme::laxfriedrichs_conservative: return "laxfriedrichs-conservative";
  }
  return "unknown";
}

const char* termination_name(Termination t) {
  switch (t) {
  case Termination::reached_t_end: return "reached-t-end";
  case Termination::blowup_detected: return "blowup-detected";
  case Termination::hyperbolicity_lost: return "hyperbolicity-lost";
  }
  return "unknown";
}

FieldGrid make_initial_data(const InitialDataSpec& spec) {
  if (spec.n < 2) fail(errc::invalid_state, "initial data needs degree n >= 2");
  if (spec.M < 8) fail(errc::invalid_state, "initial data needs at least 8 cells");
  if (spec.L <= 0.0) fail(errc::invalid_state, "initial data period must be positive");
  if (static_cast<int>(spec.fields.size()) != spec.n)
    fail(errc::arity_error, "initial data needs one field spec per coefficient");

  FieldGrid grid;
  grid.length = spec.L;
  grid.time = 0.0;
  grid.cells.resize(spec.M, FieldPoint(spec.n, 0.0));
  for (int j = 0; j < spec.M; ++j) {
    double x = grid.x_center(j);
    for (int k = 0; k < spec.n; ++k) {
      double v = spec.fields[k].mean;
      for (const InitialMode& mode : spec.fields[k].modes)
        v += mode.amplitude * std::sin(2.0 * M_PI * mode.mode * x / spec.L + mode.phase);
      grid.cells[j][k] = v;
    }
  }

  for (int j = 0; j < spec.M; ++j) {
    if (metric_g(grid.cells[j]) <= 0.0)
      fail(errc::invalid_state,
           "initial data rejected: g <= 0 at cell " + std::to_string(j));
    Spectrum sp = spectrum(grid.cells[j]);
    if (sp.cls != Hyperbolicity::strictly_hyperbolic)
      fail(errc::classification_error,
           "initial data rejected: cell " + std::to_string(j) + " is " +
               hyperbolicity_name(sp.cls));
  }
  return grid;
}

namespace {

struct CellSpectra {
  std::vector<Spectrum> sp;
  double max_lambda = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  int count_sh = 0, count_deg = 0, count_ell = 0;
};

CellSpectra analyze_cells(const FieldGrid& grid) {
  CellSpectra cs;
  cs.sp.reserve(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    Spectrum sp = spectrum(grid.cells[j]);
    for (double l : sp.lambda) cs.max_lambda = std::max(cs.max_lambda, std::abs(l));
    cs.min_gap = std::min(cs.min_gap, sp.min_gap);
    switch (sp.cls) {
    case Hyperbolicity::strictly_hyperbolic: ++cs.count_sh; break;
    case Hyperbolicity::degenerate: ++cs.count_deg; break;
    case Hyperbolicity::elliptic: ++cs.count_ell; break;
    }
    cs.sp.push_back(std::move(sp));
  }
  return cs;
}

double max_gradient(const FieldGrid& grid) {
  double worst = 0.0;
  double invdx = 1.0 / grid.dx();
  int m = grid.size(), n = grid.n();
  for (int j = 0; j < m; ++j) {
    const FieldPoint& a = grid.cells[j];
    const FieldPoint& b = grid.cell(j + 1);
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(b[k] - a[k]) * invdx);
  }
  return worst;
}

bool all_finite(const FieldGrid& grid) {
  for (const FieldPoint& u : grid.cells)
    for (double v : u)
      if (!std::isfinite(v)) return false;
  return true;
}

// Characteristic decomposition at an interface state: eigenvalues from the
// closed-form polynomial, right eigenvectors by the backward recurrence
// v_{k-1} = (lambda v_k - col_k)/g from v_n = 1, left rows Vandermonde in
// lambda/g.  alpha = (l . dU)/(l . v) per field.
struct InterfaceWaves {
  std::vector<double> lambda;
  std::vector<std::vector<double>> wave; // wave[i][k] = alpha_i * v_i[k]
};

InterfaceWaves decompose_interface(const FieldPoint& ubar, const std::vector<double>& du) {
  Spectrum sp = spectrum(ubar);
  if (sp.cls != Hyperbolicity::strictly_hyperbolic)
    fail(errc::classification_error,
         std::string("interface state is ") + hyperbolicity_name(sp.cls));
  int n = degree(ubar);
  double g = metric_g(ubar);

  InterfaceWaves w;
  w.lambda = sp.lambda;
  w.wave.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    double lam = sp.lambda[i];
    std::vector<double> v(n, 0.0);
    v[n - 1] = 1.0;
    for (int k = n - 1; k >= 1; --k)
      v[k - 1] = (lam * v[k] - matrix_last_column(ubar, k + 1)) / g;
    double t = lam / g;
    double ldotdu = 0.0, ldotv = 0.0, tp = 1.0;
    for (int k = 0; k < n; ++k) {
      ldotdu += tp * du[k];
      ldotv += tp * v[k];
      tp *= t;
    }
    if (std::abs(ldotv) < 1e-13)
      fail(errc::degenerate_graph, "characteristic basis is numerically singular");
    double alpha = ldotdu / ldotv;
    for (int k = 0; k < n; ++k) w.wave[i][k] = alpha * v[k];
  }
  return w;
}

FieldGrid step_upwind(const FieldGrid& grid, double dt) {
  int m = grid.size(), n = grid.n();
  double coef = dt / grid.dx();

  // Interface decompositions at arithmetic-average states.
  std::vector<InterfaceWaves> waves(m); // waves[j] sits between cells j and j+1
  for (int j = 0; j < m; ++j) {
    const FieldPoint& ul = grid.cells[j];
    const FieldPoint& ur = grid.cell(j + 1);
    FieldPoint ubar(n);
    std::vector<double> du(n);
    for (int k = 0; k < n; ++k) {
      ubar[k] = 0.5 * (ul[k] + ur[k]);
      du[k] = ur[k] - ul[k];
    }
    waves[j] = decompose_interface(ubar, du);
  }

  FieldGrid out = grid;
  out.time = grid.time + dt;
  for (int j = 0; j < m; ++j) {
    const InterfaceWaves& left = waves[(j - 1 + m) % m]; // interface j-1/2
    const InterfaceWaves& right = waves[j];              // interface j+1/2
    FieldPoint& u = out.cells[j];
    for (int i = 0; i < n; ++i) {
      double lp = std::max(left.lambda[i], 0.0);
      double lm = std::min(right.lambda[i], 0.0);
      for (int k = 0; k < n; ++k)
        u[k] -= coef * (lp * left.wave[i][k] + lm * right.wave[i][k]);
    }
  }
  return out;
}

struct GraphState {
  std::vector<std::vector<double>> f; // [law][cell]
};

GraphState graph_from_grid(const FieldGrid& grid, const std::vector<double>& c) {
  GraphState gs;
  gs.f.assign(c.size(), std::vector<double>(grid.size(), 0.0));
  for (size_t i = 0; i < c.size(); ++i)
    for (int j = 0; j < grid.size(); ++j) gs.f[i][j] = torus_graph(grid.cells[j], c[i]).f;
  return gs;
}

// One conservative update of the graph variables and the recovered grid.
// Flux of law i at a cell: -g cos(Phi_i) with the branch sign of the level.
void step_laxfriedrichs(const FieldGrid& grid, const std::vector<double>& c, double dt,
                        GraphState& gs, FieldGrid& out) {
  int m = grid.size(), n = grid.n();
  int laws = static_cast<int>(c.size());
  double dx = grid.dx();

  std::vector<std::vector<double>> flux(laws, std::vector<double>(m, 0.0));
  for (int i = 0; i < laws; ++i) {
    double sign = (c[i] > 1.0) ? 1.0 : -1.0;
    for (int j = 0; j < m; ++j) {
      double g = metric_g(grid.cells[j]);
      double f = gs.f[i][j];
      flux[i][j] = -g * sign * std::sqrt(std::max(0.0, 1.0 - f * f));
    }
  }

  for (int i = 0; i < laws; ++i) {
    std::vector<double>& f = gs.f[i];
    std::vector<double> fnew(m);
    for (int j = 0; j < m; ++j) {
      int jp = (j + 1) % m, jm = (j - 1 + m) % m;
      double fhat_p = 0.5 * (flux[i][j] + flux[i][jp]) - (dx / (2.0 * dt)) * (f[jp] - f[j]);
      double fhat_m = 0.5 * (flux[i][jm] + flux[i][j]) - (dx / (2.0 * dt)) * (f[j] - f[jm]);
      fnew[j] = f[j] - (dt / dx) * (fhat_p - fhat_m);
    }
    gs.f[i] = std::move(fnew);
  }

  out = grid;
  out.time = grid.time + dt;
  for (int j = 0; j < m; ++j) {
    std::vector<double> fj(laws);
    for (int i = 0; i < laws; ++i) fj[i] = gs.f[i][j];
    out.cells[j] = invert_torus_map(fj, c, grid.cells[j]);
  }
  (void)n;
}

double cfl_dt(const FieldGrid& grid, const CellSpectra& cs, const EvolutionParams& params) {
  double maxl = std::max(cs.max_lambda, 1e-12);
  return params.cfl * grid.dx() / maxl;
}

// Neumaier-compensated sum: the conservation diagnostic must resolve 1e-12
// differences between O(M) sums.
double stable_sum(const std::vector<double>& v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x)) comp += (s - t) + x;
    else comp += (x - t) + s;
    s = t;
  }
  return s + comp;
}

} // namespace

FieldGrid step(const FieldGrid& grid, const EvolutionParams& params) {
  validate_grid(grid);
  if (params.cfl <= 0.0 || params.cfl > 1.0)
    fail(errc::config_error, "cfl must lie in (0, 1]");
  CellSpectra cs = analyze_cells(grid);
  double dt = cfl_dt(grid, cs, params);
  if (params.scheme == Scheme::upwind_quasilinear) return step_upwind(grid, dt);
  std::vector<double> c = params.claw_levels.empty() ? default_claw_levels(grid.n())
                                                     : params.claw_levels;
  GraphState gs = graph_from_grid(grid, c);
  FieldGrid out;
  step_laxfriedrichs(grid, c, dt, gs, out);
  return out;
}

EvolutionHistory evolve(const FieldGrid& grid0, const EvolutionParams& params) {
  validate_grid(grid0);
  if (params.cfl <= 0.0 || params.cfl > 1.0)
    fail(errc::config_error, "cfl must lie in (0, 1]");
  if (params.t_end <= 0.0) fail(errc::config_error, "t_end must be positive");
  if (params.snapshot_stride < 1) fail(errc::config_error, "snapshot_stride must be >= 1");

  EvolutionHistory hist;
  hist.snapshots.push_back(grid0);

  bool conservative = params.scheme == Scheme::laxfriedrichs_conservative;
  std::vector<double> c;
  GraphState gs;
  std::vector<double> prev_sums;
  if (conservative) {
    c = params.claw_levels.empty() ? default_claw_levels(grid0.n()) : params.claw_levels;
    hist.claw_levels = c;
    gs = graph_from_grid(grid0, c);
    hist.f_snapshots.push_back(gs.f);
    for (const auto& fi : gs.f) prev_sums.push_back(stable_sum(fi));
  }

  double grad0 = max_gradient(grid0);
  hist.gradient_cap = (params.blowup_gradient_cap > 0.0)
                          ? params.blowup_gradient_cap
                          : 1e3 * std::max(grad0, 1.0);

  FieldGrid grid = grid0;
  double t = grid0.time;
  hist.end_time = t;

  for (int stepno = 1; stepno <= params.max_steps; ++stepno) {
    if (t >= params.t_end - 1e-14 * (1.0 + std::abs(params.t_end))) {
      hist.termination = Termination::reached_t_end;
      break;
    }

    CellSpectra cs = analyze_cells(grid);
    if (cs.count_sh != grid.size()) {
      if (params.policy == HyperbolicityPolicy::halt || !conservative) {
        // The upwind path cannot decompose non-hyperbolic interfaces either
        // way; the conservative path may push on under the warn policy.
        if (params.policy == HyperbolicityPolicy::halt) {
          hist.termination = Termination::hyperbolicity_lost;
          hist.termination_detail = std::to_string(cs.count_deg) + " degenerate, " +
                                    std::to_string(cs.count_ell) + " elliptic cells";
          break;
        }
      }
    }

    double dt = cfl_dt(grid, cs, params);
    dt = std::min(dt, params.t_end - t);

    FieldGrid next;
    try {
      if (conservative) {
        step_laxfriedrichs(grid, c, dt, gs, next);
      } else {
        next = step_upwind(grid, dt);
      }
    } catch (const Error& e) {
      hist.termination = Termination::hyperbolicity_lost;
      hist.termination_detail = e.what();
      break;
    }

    if (conservative) {
      for (size_t i = 0; i < c.size(); ++i) {
        double s = stable_sum(gs.f[i]);
        hist.max_conservation_step_drift =
            std::max(hist.max_conservation_step_drift, std::abs(s - prev_sums[i]));
        prev_sums[i] = s;
      }
    }

    t = next.time;
    double grad = max_gradient(next);
    bool finite = all_finite(next);
    bool positive = true;
    for (const FieldPoint& u : next.cells) positive = positive && metric_g(u) > 0.0;

    StepDiagnostics d;
    d.step = stepno;
    d.t = t;
    d.dt = dt;
    d.max_lambda = cs.max_lambda;
    d.min_gap = cs.min_gap;
    d.max_grad = grad;
    d.count_sh = cs.count_sh;
    d.count_deg = cs.count_deg;
    d.count_ell = cs.count_ell;
    hist.diagnostics.push_back(d);
    hist.steps_taken = stepno;
    hist.end_time = t;

    if (!finite || !positive || grad > hist.gradient_cap) {
      hist.termination = Termination::blowup_detected;
      hist.termination_detail = !finite ? "non-finite field value"
                              : !positive ? "metric coefficient reached g <= 0"
                                          : "gradient cap exceeded";
      // No snapshot past the blow-up: the last stored state is pre-shock.
      break;
    }

    grid = std::move(next);
    if (stepno % params.snapshot_stride == 0) {
      hist.snapshots.push_back(grid);
      if (conservative) hist.f_snapshots.push_back(gs.f);
    }
  }

  if (hist.snapshots.back().time < hist.end_time - 1e-15 &&
      hist.termination == Termination::reached_t_end) {
    hist.snapshots.push_back(grid);
    if (conservative) hist.f_snapshots.push_back(gs.f);
  }

  // Quasi-periodicity diagnostic: best cyclic cell shift matching the final
  // snapshot back to the initial one (observed, never enforced).
  const FieldGrid& first = hist.snapshots.front();
  const FieldGrid& last = hist.snapshots.back();
  if (first.size() == last.size()) {
    int m = first.size(), n = first.n();
    double best = std::numeric_limits<double>::infinity();
    int best_s = 0;
    for (int s = 0; s < m; ++s) {
      double worst = 0.0;
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < n; ++k)
          worst = std::max(worst, std::abs(last.cell(j + s)[k] - first.cells[j][k]));
      if (worst < best) {
        best = worst;
        best_s = s;
      }
    }
    hist.best_shift_error = best;
    hist.best_shift_cells = best_s;
  }
  return hist;
}

namespace {

// Linear-in-x, linear-in-t interpolation of a stored history.
FieldPoint interp_state(const std::vector<FieldGrid>& snaps, size_t seg, double t, double x) {
  const FieldGrid& g0 = snaps[seg];
  const FieldGrid& g1 = snaps[seg + 1];
  double w = (g1.time > g0.time) ? (t - g0.time) / (g1.time - g0.time) : 0.0;
  w = std::clamp(w, 0.0, 1.0);

  auto interp_x = [](const FieldGrid& g, double xx) {
    double L = g.length;
    double xr = xx - L * std::floor(xx / L);
    double s = xr / g.dx() - 0.5;
    int j0 = static_cast<int>(std::floor(s));
    double w1 = s - j0;
    const FieldPoint& a = g.cell(j0);
    const FieldPoint& b = g.cell(j0 + 1);
    FieldPoint out(a.size());
    for (size_t k = 0; k < a.size(); ++k) out[k] = (1.0 - w1) * a[k] + w1 * b[k];
    return out;
  };

  FieldPoint u0 = interp_x(g0, x), u1 = interp_x(g1, x);
  FieldPoint out(u0.size());
  for (size_t k = 0; k < u0.size(); ++k) out[k] = (1.0 - w) * u0[k] + w * u1[k];
  return out;
}

} // namespace

TraceResult characteristic_trace(const EvolutionHistory& history, int field_index, double x0) {
  if (history.snapshots.size() < 2)
    fail(errc::arity_error, "characteristic trace needs at least two snapshots");
  int n = history.snapshots.front().n();
  if (field_index < 0 || field_index >= n)
    fail(errc::arity_error, "characteristic field index out of range");

  TraceResult out;
  double x = x0;
  double r0 = 0.0;

  auto lambda_at = [&](size_t seg, double t, double xx) {
    FieldPoint u = interp_state(history.snapshots, seg, t, xx);
    Spectrum sp = spectrum(u);
    if (sp.cls != Hyperbolicity::strictly_hyperbolic)
      fail(errc::classification_error, "trace crossed a non-hyperbolic state");
    return sp.lambda[field_index];
  };

  for (size_t seg = 0; seg + 1 < history.snapshots.size(); ++seg) {
    double t0 = history.snapshots[seg].time;
    double t1 = history.snapshots[seg + 1].time;
    if (seg == 0) {
      FieldPoint u = interp_state(history.snapshots, seg, t0, x);
      Spectrum sp = spectrum(u);
      if (sp.cls != Hyperbolicity::strictly_hyperbolic) {
        out.truncated = true;
        return out;
      }
      r0 = eval_integral_angle(u, sp.phi[field_index]);
      out.t.push_back(t0);
      out.x.push_back(x);
      out.r.push_back(r0);
    }
    try {
      // Two RK4 substeps across the snapshot interval.
      int sub = 2;
      double h = (t1 - t0) / sub;
      double tcur = t0;
      for (int ss = 0; ss < sub; ++ss) {
        double k1 = lambda_at(seg, tcur, x);
        double k2 = lambda_at(seg, tcur + 0.5 * h, x + 0.5 * h * k1);
        double k3 = lambda_at(seg, tcur + 0.5 * h, x + 0.5 * h * k2);
        double k4 = lambda_at(seg, tcur + h, x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tcur += h;
      }
      FieldPoint u = interp_state(history.snapshots, seg, t1, x);
      Spectrum sp = spectrum(u);
      if (sp.cls != Hyperbolicity::strictly_hyperbolic) {
        out.truncated = true;
        break;
      }
      double r = eval_integral_angle(u, sp.phi[field_index]);
      out.t.push_back(t1);
      out.x.push_back(x);
      out.r.push_back(r);
      out.max_drift = std::max(out.max_drift, std::abs(r - r0));
    } catch (const Error&) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

} // namespace torusflow
