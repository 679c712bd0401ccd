#pragma once

#include <vector>

#include "torusflow/field.hpp"

namespace torusflow {

// Power-series data of the level curve F(p(eps)) = 1 + eps near p = 1:
//   p(eps) = 1 - G_2 eps^2 - G_3 eps^3 - ... - G_K eps^K + O(eps^{K+1})
// together with the matching flux series.
struct CLawSeries {
  int K = 0;                // truncation order >= 2
  std::vector<double> G;    // G[0] = G_2, ..., G[K-2] = G_K
  std::vector<double> flux; // flux[m] = eps^m coefficient, m = 0..K
};

// Order-by-order solve of F(p(eps)) = 1 + eps through the angle substitution
// p = cos(theta): no fractional powers appear and the eps^1 coefficient of p
// is asserted to vanish rather than assumed.  flux is the series of the
// (branch-signed) flux -g cos(Phi) = -g sin(theta) along p(eps).
CLawSeries series_claws(const FieldPoint& u, int K);

struct GraphPoint {
  double f = 0.0;    // sin(Phi): the graph value, |f| <= 1
  double flux = 0.0; // -g cos(Phi), signed by the branch
};

// Root of F(Phi) = c on the branch continuously connected to Phi = pi/2
// (where F = 1): for c > 1 the root has cos(Phi) > 0, for c < 1 it continues
// through Phi > pi/2 where cos(Phi) < 0.  The graph value is f = sin(Phi);
// the flux keeps the sign of -g cos(Phi) so that d/dt f + d/dx flux = 0
// holds on both sides of c = 1.
GraphPoint torus_graph(const FieldPoint& u, double c);

// Recover u from n graph values f_i on levels c_i.  The defining equations
// are linear in the coefficients (Vandermonde-like matrix in (q_i, f_i) with
// q_i = sign(c_i - 1) sqrt(1 - f_i^2)); solved as a Newton iteration from
// `guess`; a guess already inside the tolerance returns unchanged.  `tol`
// bounds the level residual max_i |c_i - F(u; f_i)| relative to
// 1 + max_i |c_i|.  Levels must be pairwise distinct and != 1.
FieldPoint invert_torus_map(const std::vector<double>& f, const std::vector<double>& c,
                            const FieldPoint& guess, double tol = 1e-12, int max_iter = 20);

// Default level set c_i = 1 - 0.01 (i+1), i = 0..n-1.
std::vector<double> default_claw_levels(int n);

struct ClawResidual {
  double t_mid = 0.0;                           // time of the middle level
  std::vector<std::vector<double>> f;           // [law][cell] at the middle level
  std::vector<std::vector<double>> flux;        // [law][cell] at the middle level
  std::vector<std::vector<double>> residual;    // [law][cell]
  double max_abs = 0.0;
};

// Discrete claw defect d/dt f_i + d/dx flux_i on the middle of three
// consecutive time levels: centered (possibly nonuniform) differencing in t,
// centered periodic differencing in x.  Graph values are recomputed from the
// field history via torus_graph.
ClawResidual claw_residual(const std::vector<FieldGrid>& history, const std::vector<double>& c);

} // namespace torusflow
