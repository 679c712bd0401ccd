#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "torusflow/field.hpp"

namespace torusflow {

enum class Hyperbolicity { strictly_hyperbolic, degenerate, elliptic };

const char* hyperbolicity_name(Hyperbolicity h);

struct Spectrum {
  std::vector<std::complex<double>> roots; // sorted by (re, im)
  std::vector<double> lambda;              // real parts in the sorted order
  std::vector<double> phi;                 // atan(lambda_i / g); meaningful when real
  Hyperbolicity cls = Hyperbolicity::elliptic;
  double min_gap = 0.0; // min adjacent |lambda_{i+1} - lambda_i| (real parts)
  double tol_sep = 0.0; // separation tolerance actually used
};

inline double default_tol_sep(double max_abs_lambda) { return 1e-6 * (1.0 + max_abs_lambda); }

// Monic characteristic polynomial of A(U), coefficients c[0..n] in ascending
// powers (c[n] = 1), from the closed form
//   c_m = -g^{n-1-m} ((m+1) a_{m+1} - (n-m+1) a_{m-1}),  m < n.
std::vector<double> char_poly(const FieldPoint& u);

// det(lambda I - A(U)) by dense LU: the independent determinant route.
double det_lambda_minus_matrix(const FieldPoint& u, double lambda);

// The same determinant predicted through the angle chart:
//   -g^{n-1} cos^{-n}(phi) F_phi(phi),  phi = atan(lambda / g).
// The global sign is fixed once (validated by the test suites and the
// `validate` command at many random points).
double char_poly_angle_form(const FieldPoint& u, double lambda);

// Eigenvalues of A(U) via the companion matrix of char_poly (primary route)
// or via a dense eigensolve of A(U) itself (cross-check route).
// tol_sep <= 0 selects default_tol_sep.
Spectrum spectrum(const FieldPoint& u, double tol_sep = -1.0);
Spectrum spectrum_dense(const FieldPoint& u, double tol_sep = -1.0);

// r_i = F(phi_i) over the ascending strictly-hyperbolic spectrum.
std::vector<double> riemann_invariants(const FieldPoint& u);

// Rows d r_i / d a_k = cos^{n-k}(phi_i) sin^k(phi_i) for the given angles.
// (The phi-dependence contributes nothing because F_phi(phi_i) = 0.)
Eigen::MatrixXd angle_jacobian(const FieldPoint& u, const std::vector<double>& phi);

// angle_jacobian at the strictly-hyperbolic spectrum of u.
Eigen::MatrixXd riemann_jacobian(const FieldPoint& u);

// Newton solve of riemann_invariants(u) = r_target starting from guess.
FieldPoint invert_riemann_map(const std::vector<double>& r_target, const FieldPoint& guess,
                              double tol = 1e-12, int max_iter = 50);

// S(i,j) = d lambda_i / d r_j by central differences of step h in r-space,
// each perturbation realized through invert_riemann_map.  Diagonal entries
// are the genuine-nonlinearity indicators.  Requires min_gap >= 10 h.
Eigen::MatrixXd lambda_sensitivity(const FieldPoint& u, double h);

struct RichnessEntry {
  int i, j, k;
  double value;
};

// Cross-derivative compatibility defect over ordered triples (i,j,k) with
// i != j, k != i, k != j:
//   value = D_k [ (d_{r_i} lambda_j) / (lambda_i - lambda_j) ]
//         - D_i [ (d_{r_k} lambda_j) / (lambda_k - lambda_j) ]
// with nested central differences of step h in r-space.  Empty for n = 2.
std::vector<RichnessEntry> richness_residual(const FieldPoint& u, double h);
double richness_residual_max(const FieldPoint& u, double h);

struct GnRecord {
  double s = 0.0;          // parameter along the scanned family
  FieldPoint point;        // u(s)
  int field_index = 0;     // 0-based characteristic field
  double indicator = 0.0;  // d lambda_i / d r_i at u(s)
  double step = 0.0;       // FD step used
};

// Scan the genuine-nonlinearity indicators along the segment
// u(s) = base + s * direction, s in [s0, s1], at `nodes` evenly spaced
// points; each detected sign change is refined by `refine` bisection steps,
// whose evaluations are appended as extra records.
std::vector<GnRecord> gn_scan(const FieldPoint& base, const std::vector<double>& direction,
                              double s0, double s1, int nodes, double h, int refine);

} // namespace torusflow
