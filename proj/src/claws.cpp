#include "torusflow/claws.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "torusflow/system.hpp"

namespace torusflow {

namespace {

// Truncated power series, coefficients c[0..K].
using Series = std::vector<double>;

Series smul(const Series& a, const Series& b, int K) {
  Series z(K + 1, 0.0);
  for (int i = 0; i <= K; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; i + j <= K; ++j) z[i + j] += a[i] * b[j];
  }
  return z;
}

Series spow(const Series& a, int m, int K) {
  Series z(K + 1, 0.0);
  z[0] = 1.0;
  for (int i = 0; i < m; ++i) z = smul(z, a, K);
  return z;
}

// outer(inner(eps)) with inner[0] == 0.
Series scompose(const Series& outer, const Series& inner, int K) {
  Series z(K + 1, 0.0);
  z[0] = outer[0];
  Series pw(K + 1, 0.0);
  pw[0] = 1.0;
  for (int m = 1; m <= K; ++m) {
    pw = smul(pw, inner, K);
    for (int i = 0; i <= K; ++i) z[i] += outer[m] * pw[i];
  }
  return z;
}

Series sin_series(int K) {
  Series c(K + 1, 0.0);
  double fact = 1.0;
  for (int m = 1; m <= K; ++m) {
    fact *= m;
    if (m % 2 == 1) c[m] = ((m - 1) / 2 % 2 == 0 ? 1.0 : -1.0) / fact;
  }
  return c;
}

Series cos_series(int K) {
  Series c(K + 1, 0.0);
  c[0] = 1.0;
  double fact = 1.0;
  for (int m = 1; m <= K; ++m) {
    fact *= m;
    if (m % 2 == 0) c[m] = (m / 2 % 2 == 0 ? 1.0 : -1.0) / fact;
  }
  return c;
}

} // namespace

CLawSeries series_claws(const FieldPoint& u, int K) {
  validate_point(u);
  if (K < 2) fail(errc::arity_error, "series order K must be at least 2");
  int n = degree(u);
  double g = metric_g(u);

  // W(theta) = F at angle pi/2 - theta: W(0) = 1, W'(0) = g.
  Series S = sin_series(K), C = cos_series(K);
  Series W(K + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double ak = coeff(u, k);
    if (ak == 0.0) continue;
    Series term = smul(spow(S, n - k, K), spow(C, k, K), K);
    for (int i = 0; i <= K; ++i) W[i] += ak * term[i];
  }
  if (std::abs(W[1]) < 1e-300)
    fail(errc::invalid_state, "series engine: vanishing leading coefficient");

  // Solve W(theta(eps)) = 1 + eps order by order; theta(0) = 0.
  Series th(K + 1, 0.0);
  for (int m = 1; m <= K; ++m) {
    Series cur = scompose(W, th, K);
    double target = (m == 1) ? 1.0 : 0.0;
    th[m] = (target - cur[m]) / W[1];
  }

  Series p = scompose(C, th, K); // p(eps) = cos(theta)
  if (std::abs(p[1]) > 1e-10)
    fail(errc::invalid_state, "series engine: eps^1 coefficient of p failed to vanish");

  CLawSeries out;
  out.K = K;
  out.G.resize(K - 1);
  for (int m = 2; m <= K; ++m) out.G[m - 2] = -p[m];

  Series sth = scompose(S, th, K); // sin(theta(eps))
  out.flux.resize(K + 1);
  for (int m = 0; m <= K; ++m) out.flux[m] = -g * sth[m];
  return out;
}

GraphPoint torus_graph(const FieldPoint& u, double c) {
  validate_point(u);
  double g = metric_g(u);
  if (c == 1.0) return {1.0, 0.0};

  // March theta away from 0 (W(0) = 1, increasing) until the level c is
  // bracketed; theta > 0 reaches levels above 1, theta < 0 levels below.
  auto W = [&](double th) { return eval_integral_angle(u, M_PI / 2 - th); };
  auto Wp = [&](double th) { return -eval_integral_dphi(u, M_PI / 2 - th); };

  double dir = (c > 1.0) ? 1.0 : -1.0;
  double step = 1e-3 * dir;
  double th0 = 0.0, w0 = 1.0;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  // |theta| <= pi covers the whole monotone branch generously.
  for (int i = 0; i < 4000; ++i) {
    double th1 = th0 + step;
    double w1 = W(th1);
    if ((w0 - c) * (w1 - c) <= 0.0) {
      lo = th0;
      hi = th1;
      bracketed = true;
      break;
    }
    if ((w1 - w0) * dir <= 0.0) {
      // Monotonicity failed before the level was reached: the branch ended
      // at a critical point of the level function.
      if (std::abs(w0 - c) <= 1e-6 * (1.0 + std::abs(c)))
        fail(errc::critical_level_error,
             "level " + std::to_string(c) + " sits at a critical value of the branch");
      fail(errc::range_error,
           "level " + std::to_string(c) + " is not attained on the tracked branch");
    }
    th0 = th1;
    w0 = w1;
  }
  if (!bracketed)
    fail(errc::range_error, "level " + std::to_string(c) + " is out of the marching range");

  // Safeguarded Newton inside the sign-change bracket, run to stagnation so
  // the root carries no more error than the level evaluation itself; the
  // recovered coefficients downstream amplify any slack here by large powers
  // of 1/cos(Phi).
  if (W(lo) - c > 0.0) std::swap(lo, hi); // keep W(lo) <= c <= W(hi)
  double th = 0.5 * (lo + hi);
  double w = W(th) - c;
  double best = std::abs(w);
  int stale = 0;
  for (int it = 0; it < 100 && w != 0.0 && stale < 3; ++it) {
    if (w > 0.0) hi = th; else lo = th;
    double dw = Wp(th);
    double next = (dw != 0.0) ? th - w / dw : th;
    if (!(next > std::min(lo, hi) && next < std::max(lo, hi)))
      next = 0.5 * (lo + hi);
    if (next == th) break;
    th = next;
    w = W(th) - c;
    if (std::abs(w) < best) {
      best = std::abs(w);
      stale = 0;
    } else {
      ++stale;
    }
  }
  double wfinal = W(th) - c;
  if (std::abs(wfinal) > 1e-12 * (1.0 + std::abs(c)))
    fail(errc::no_convergence, "graph root polish did not reach the level tolerance");
  if (std::abs(Wp(th)) < 1e-8 * (1.0 + std::abs(c)))
    fail(errc::critical_level_error, "graph root lies at a near-critical level");

  // f = sin(Phi) = cos(theta); flux = -g cos(Phi) = -g sin(theta), which is
  // negative for c > 1 and positive for c < 1 (the branch continues through
  // Phi = pi/2 where cos changes sign).
  return {std::cos(th), -g * std::sin(th)};
}

std::vector<double> default_claw_levels(int n) {
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = 1.0 - 0.01 * (i + 1);
  return c;
}

FieldPoint invert_torus_map(const std::vector<double>& f, const std::vector<double>& c,
                            const FieldPoint& guess, double tol, int max_iter) {
  validate_point(guess);
  int n = degree(guess);
  if (static_cast<int>(f.size()) != n || static_cast<int>(c.size()) != n)
    fail(errc::arity_error, "graph inversion needs n values and n levels");
  for (int i = 0; i < n; ++i) {
    if (std::abs(f[i]) >= 1.0)
      fail(errc::degenerate_graph, "graph value " + std::to_string(i) + " has |f| >= 1");
    if (c[i] == 1.0)
      fail(errc::degenerate_graph, "level c = 1 pins the graph at the degenerate corner");
    for (int j = i + 1; j < n; ++j)
      if (c[i] == c[j]) fail(errc::degenerate_graph, "levels must be pairwise distinct");
  }

  // q_i = cos(Phi_i): the branch sign follows the level side; (1-f)(1+f)
  // avoids the cancellation of 1 - f^2 for f near 1.
  Eigen::MatrixXd Wm(n, n);
  for (int i = 0; i < n; ++i) {
    double s = (c[i] > 1.0) ? 1.0 : -1.0;
    double q = s * std::sqrt(std::max(0.0, (1.0 - f[i]) * (1.0 + f[i])));
    for (int k = 0; k < n; ++k) Wm(i, k) = std::pow(q, n - k) * std::pow(f[i], k);
  }
  // The rows carry wildly different natural scales (powers of cos(Phi_i)), so
  // both the singularity test and the solve work on the row-equilibrated
  // matrix; rank loss is judged relative to the largest pivot.
  Eigen::VectorXd row_scale(n);
  for (int i = 0; i < n; ++i) {
    row_scale[i] = Wm.row(i).cwiseAbs().maxCoeff();
    if (row_scale[i] == 0.0)
      fail(errc::degenerate_graph, "graph inversion matrix is numerically singular");
  }
  Eigen::MatrixXd B = row_scale.cwiseInverse().asDiagonal() * Wm;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  double max_pivot = std::abs(lu.matrixLU()(0, 0));
  double min_pivot = std::abs(lu.matrixLU()(n - 1, n - 1));
  if (max_pivot == 0.0 || min_pivot < 1e-13 * max_pivot)
    fail(errc::degenerate_graph, "graph inversion matrix is numerically singular");

  // The defining equations are linear in u, so the first pass already lands
  // on the solution; further passes are iterative refinement.  A guess that
  // already meets the tolerance returns unchanged, keeping repeated per-cell
  // recovery in the conservative scheme a strict fixed point.
  double cmax = 0.0;
  for (int i = 0; i < n; ++i) cmax = std::max(cmax, std::abs(c[i]));
  FieldPoint u = guess;
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd res(n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double fi = 0.0;
      for (int k = 0; k < n; ++k) fi += Wm(i, k) * u[k];
      fi += std::pow(f[i], n); // a_n = 1 term
      res[i] = (c[i] - fi) / row_scale[i];
      worst = std::max(worst, std::abs(c[i] - fi));
    }
    if (worst < best) {
      best = worst;
      stale = 0;
    } else {
      ++stale;
    }
    if (worst <= tol * (1.0 + cmax)) {
      if (metric_g(u) <= 0.0)
        fail(errc::degenerate_graph, "graph inversion recovered a non-positive metric");
      return u;
    }
    if (stale >= 3) break;
    Eigen::VectorXd step = lu.solve(res);
    if (!step.allFinite()) fail(errc::no_convergence, "graph inversion produced a non-finite step");
    for (int k = 0; k < n; ++k) u[k] += step[k];
  }
  fail(errc::no_convergence, "graph inversion did not converge");
}

ClawResidual claw_residual(const std::vector<FieldGrid>& history, const std::vector<double>& c) {
  if (history.size() < 3)
    fail(errc::arity_error, "claw residual needs at least 3 consecutive time levels");
  // Use the middle three levels when given more.
  size_t mid = history.size() / 2;
  const FieldGrid& gm = history[mid - 1];
  const FieldGrid& g0 = history[mid];
  const FieldGrid& gp = history[mid + 1];
  validate_grid(gm);
  validate_grid(g0);
  validate_grid(gp);
  int m = g0.size(), n = g0.n();
  if (gm.size() != m || gp.size() != m || gm.n() != n || gp.n() != n)
    fail(errc::arity_error, "claw residual history levels are non-conformable");
  int laws = static_cast<int>(c.size());
  if (laws < 1) fail(errc::arity_error, "claw residual needs at least one level value");

  double hm = g0.time - gm.time;
  double hp = gp.time - g0.time;
  if (hm <= 0.0 || hp <= 0.0)
    fail(errc::arity_error, "claw residual history times must be strictly increasing");

  ClawResidual out;
  out.t_mid = g0.time;
  out.f.assign(laws, std::vector<double>(m, 0.0));
  out.flux.assign(laws, std::vector<double>(m, 0.0));
  out.residual.assign(laws, std::vector<double>(m, 0.0));

  double inv2dx = 1.0 / (2.0 * g0.dx());
  for (int i = 0; i < laws; ++i) {
    std::vector<double> f_m(m), f_0(m), f_p(m), flux_0(m);
    for (int j = 0; j < m; ++j) {
      f_m[j] = torus_graph(gm.cells[j], c[i]).f;
      GraphPoint gp0 = torus_graph(g0.cells[j], c[i]);
      f_0[j] = gp0.f;
      flux_0[j] = gp0.flux;
      f_p[j] = torus_graph(gp.cells[j], c[i]).f;
    }
    for (int j = 0; j < m; ++j) {
      // Nonuniform centered time derivative (reduces to (f_p - f_m)/(2 dt)
      // for equal spacing).
      double ft = (hm * hm * f_p[j] - hp * hp * f_m[j] - (hm * hm - hp * hp) * f_0[j]) /
                  (hm * hp * (hm + hp));
      double fx = (flux_0[(j + 1) % m] - flux_0[(j - 1 + m) % m]) * inv2dx;
      out.f[i][j] = f_0[j];
      out.flux[i][j] = flux_0[j];
      out.residual[i][j] = ft + fx;
      out.max_abs = std::max(out.max_abs, std::abs(ft + fx));
    }
  }
  return out;
}

} // namespace torusflow
