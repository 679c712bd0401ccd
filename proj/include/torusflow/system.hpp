#pragma once

#include <Eigen/Dense>
#include <vector>

#include "torusflow/field.hpp"

namespace torusflow {

// Quasi-linear system U_t + A(U) U_x = 0.  A(U) carries g on the entire
// subdiagonal and k*a_k - (n+2-k)*a_{k-2} in the last column of row k
// (1-indexed); everything else is zero.
Eigen::MatrixXd build_matrix(const FieldPoint& u);

// Last-column entry of row k (1-indexed) of A(U).
double matrix_last_column(const FieldPoint& u, int k);

// The degree-n integral in its three charts.
//
// Angle chart:    F(phi)   = sum_k a_k cos^{n-k}(phi) sin^k(phi)
// p chart:        F(p)     = sum_k a_k (1-p^2)^{(n-k)/2} p^k   (cos >= 0 branch)
// Momentum chart: F(p1,p2) = sum_k a_k (p1/g)^{n-k} p2^k
double eval_integral_angle(const FieldPoint& u, double phi);
double eval_integral_p(const FieldPoint& u, double p);
double eval_integral_momentum(const FieldPoint& u, double p1, double p2);

// d/dphi of the angle chart.
double eval_integral_dphi(const FieldPoint& u, double phi);

// Residual U_t + A(U) U_x per cell, with U_x by centered periodic
// differences and U_t supplied by the caller (one vector of n values per
// cell, e.g. from an evolution step or a manufactured solution).
std::vector<std::vector<double>>
quasilinear_residual(const FieldGrid& grid, const std::vector<std::vector<double>>& grid_dt);

class FieldSampler; // samplers.hpp

// Commutation-relation residual at (t, x, phi), evaluated directly from a
// sampled coefficient field with partial derivatives:
//   E = F_t cos(phi)/g + F_x sin(phi) + F_phi g_x cos(phi)/g.
// Vanishes for every phi exactly when the sampled field solves the system.
double bracket_residual(const FieldSampler& field, double phi, double t, double x);

} // namespace torusflow
