#include "torusflow/system.hpp"

#include <cmath>

#include "torusflow/samplers.hpp"

namespace torusflow {

namespace {

// powers[i] = b^i for i = 0..n
std::vector<double> powers(double b, int n) {
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  for (int i = 1; i <= n; ++i) p[i] = p[i - 1] * b;
  return p;
}

} // namespace

double matrix_last_column(const FieldPoint& u, int k) {
  int n = degree(u);
  return k * coeff(u, k) - (n + 2 - k) * coeff(u, k - 2);
}

Eigen::MatrixXd build_matrix(const FieldPoint& u) {
  validate_point(u);
  int n = degree(u);
  double g = metric_g(u);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int r = 1; r < n; ++r) A(r, r - 1) = g;
  for (int r = 0; r < n; ++r) A(r, n - 1) = matrix_last_column(u, r + 1);
  return A;
}

double eval_integral_angle(const FieldPoint& u, double phi) {
  validate_point(u);
  int n = degree(u);
  std::vector<double> cp = powers(std::cos(phi), n);
  std::vector<double> sp = powers(std::sin(phi), n);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += coeff(u, k) * cp[n - k] * sp[k];
  return sum;
}

double eval_integral_p(const FieldPoint& u, double p) {
  validate_point(u);
  if (std::abs(p) > 1.0) fail(errc::domain_error, "integral p chart needs |p| <= 1");
  int n = degree(u);
  double q = std::sqrt(std::max(0.0, 1.0 - p * p)); // cos >= 0 branch
  std::vector<double> qp = powers(q, n);
  std::vector<double> pp = powers(p, n);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += coeff(u, k) * qp[n - k] * pp[k];
  return sum;
}

double eval_integral_momentum(const FieldPoint& u, double p1, double p2) {
  validate_point(u);
  int n = degree(u);
  std::vector<double> wp = powers(p1 / metric_g(u), n);
  std::vector<double> pp = powers(p2, n);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) sum += coeff(u, k) * wp[n - k] * pp[k];
  return sum;
}

double eval_integral_dphi(const FieldPoint& u, double phi) {
  validate_point(u);
  int n = degree(u);
  std::vector<double> cp = powers(std::cos(phi), n + 1);
  std::vector<double> sp = powers(std::sin(phi), n + 1);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    double ak = coeff(u, k);
    if (ak == 0.0) continue;
    if (k >= 1) sum += ak * k * cp[n - k + 1] * sp[k - 1];
    if (n - k >= 1) sum -= ak * (n - k) * cp[n - k - 1] * sp[k + 1];
  }
  return sum;
}

std::vector<std::vector<double>>
quasilinear_residual(const FieldGrid& grid, const std::vector<std::vector<double>>& grid_dt) {
  validate_grid(grid);
  int m = grid.size(), n = grid.n();
  if (static_cast<int>(grid_dt.size()) != m)
    fail(errc::arity_error, "time-derivative field does not match the grid cell count");
  for (const auto& v : grid_dt)
    if (static_cast<int>(v.size()) != n)
      fail(errc::arity_error, "time-derivative entries do not match the grid degree");

  std::vector<std::vector<double>> res(m, std::vector<double>(n, 0.0));
  double inv2dx = 1.0 / (2.0 * grid.dx());
  for (int j = 0; j < m; ++j) {
    Eigen::MatrixXd A = build_matrix(grid.cells[j]);
    Eigen::VectorXd ux(n);
    const FieldPoint& up = grid.cell(j + 1);
    const FieldPoint& um = grid.cell(j - 1);
    for (int k = 0; k < n; ++k) ux[k] = (up[k] - um[k]) * inv2dx;
    Eigen::VectorXd r = A * ux;
    for (int k = 0; k < n; ++k) res[j][k] = grid_dt[j][k] + r[k];
  }
  return res;
}

double bracket_residual(const FieldSampler& field, double phi, double t, double x) {
  FieldSample s = field.eval(t, x);
  int n = field.n();
  std::vector<double> cp = powers(std::cos(phi), n);
  std::vector<double> sp = powers(std::sin(phi), n);
  double Ft = 0.0, Fx = 0.0;
  for (int k = 0; k < n; ++k) { // a_n is constant: no contribution
    double w = cp[n - k] * sp[k];
    Ft += s.a_t[k] * w;
    Fx += s.a_x[k] * w;
  }
  double Fphi = eval_integral_dphi(s.a, phi);
  double g = s.g();
  return Ft * cp[1] / g + Fx * sp[1] + Fphi * s.g_x() * cp[1] / g;
}

} // namespace torusflow
