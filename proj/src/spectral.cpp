#include "torusflow/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "torusflow/system.hpp"

namespace torusflow {

const char* hyperbolicity_name(Hyperbolicity h) {
  switch (h) {
  case Hyperbolicity::strictly_hyperbolic: return "strictly-hyperbolic";
  case Hyperbolicity::degenerate: return "degenerate";
  case Hyperbolicity::elliptic: return "elliptic";
  }
  return "unknown";
}

std::vector<double> char_poly(const FieldPoint& u) {
  validate_point(u);
  int n = degree(u);
  double g = metric_g(u);
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  // g^{n-1-m} for m = n-1 down to 0
  double gp = 1.0;
  for (int m = n - 1; m >= 0; --m) {
    c[m] = -gp * ((m + 1) * coeff(u, m + 1) - (n - m + 1) * coeff(u, m - 1));
    gp *= g;
  }
  return c;
}

double det_lambda_minus_matrix(const FieldPoint& u, double lambda) {
  Eigen::MatrixXd M = -build_matrix(u);
  M.diagonal().array() += lambda;
  return M.partialPivLu().determinant();
}

double char_poly_angle_form(const FieldPoint& u, double lambda) {
  validate_point(u);
  int n = degree(u);
  double g = metric_g(u);
  double phi = std::atan(lambda / g);
  double c = std::cos(phi);
  return -std::pow(g, n - 1) / std::pow(c, n) * eval_integral_dphi(u, phi);
}

namespace {

Spectrum classify(const FieldPoint& u, std::vector<std::complex<double>> roots, double tol_sep) {
  int n = degree(u);
  double g = metric_g(u);
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  Spectrum sp;
  sp.roots = roots;
  sp.lambda.resize(n);
  sp.phi.resize(n);
  double max_abs = 0.0;
  for (int i = 0; i < n; ++i) {
    sp.lambda[i] = roots[i].real();
    sp.phi[i] = std::atan(sp.lambda[i] / g);
    max_abs = std::max(max_abs, std::abs(roots[i]));
  }
  sp.tol_sep = (tol_sep > 0.0) ? tol_sep : default_tol_sep(max_abs);

  double imag_tol = 1e-10 * (1.0 + max_abs);
  bool real = true;
  for (const auto& z : roots) real = real && std::abs(z.imag()) <= imag_tol;

  sp.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i)
    sp.min_gap = std::min(sp.min_gap, sp.lambda[i + 1] - sp.lambda[i]);

  if (!real) sp.cls = Hyperbolicity::elliptic;
  else if (sp.min_gap > sp.tol_sep) sp.cls = Hyperbolicity::strictly_hyperbolic;
  else sp.cls = Hyperbolicity::degenerate;
  return sp;
}

} // namespace

Spectrum spectrum(const FieldPoint& u, double tol_sep) {
  std::vector<double> c = char_poly(u);
  int n = degree(u);
  // Companion matrix of the monic polynomial.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];
  return classify(u, std::move(roots), tol_sep);
}

Spectrum spectrum_dense(const FieldPoint& u, double tol_sep) {
  Eigen::MatrixXd A = build_matrix(u);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  int n = degree(u);
  std::vector<std::complex<double>> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];
  return classify(u, std::move(roots), tol_sep);
}

namespace {

Spectrum require_strictly_hyperbolic(const FieldPoint& u) {
  Spectrum sp = spectrum(u);
  if (sp.cls != Hyperbolicity::strictly_hyperbolic)
    fail(errc::classification_error,
         std::string("operation requires a strictly-hyperbolic point, got ") +
             hyperbolicity_name(sp.cls));
  return sp;
}

} // namespace

std::vector<double> riemann_invariants(const FieldPoint& u) {
  Spectrum sp = require_strictly_hyperbolic(u);
  std::vector<double> r(sp.phi.size());
  for (size_t i = 0; i < sp.phi.size(); ++i) r[i] = eval_integral_angle(u, sp.phi[i]);
  return r;
}

Eigen::MatrixXd angle_jacobian(const FieldPoint& u, const std::vector<double>& phi) {
  validate_point(u);
  int n = degree(u);
  if (static_cast<int>(phi.size()) != n)
    fail(errc::arity_error, "angle count does not match the field degree");
  Eigen::MatrixXd J(n, n);
  for (int i = 0; i < n; ++i) {
    double c = std::cos(phi[i]), s = std::sin(phi[i]);
    for (int k = 0; k < n; ++k) J(i, k) = std::pow(c, n - k) * std::pow(s, k);
  }
  return J;
}

Eigen::MatrixXd riemann_jacobian(const FieldPoint& u) {
  Spectrum sp = require_strictly_hyperbolic(u);
  return angle_jacobian(u, sp.phi);
}

FieldPoint invert_riemann_map(const std::vector<double>& r_target, const FieldPoint& guess,
                              double tol, int max_iter) {
  validate_point(guess);
  int n = degree(guess);
  if (static_cast<int>(r_target.size()) != n)
    fail(errc::arity_error, "target invariant count does not match the field degree");

  FieldPoint u = guess;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> r;
    try {
      r = riemann_invariants(u);
    } catch (const Error&) {
      fail(errc::no_convergence, "invariant inversion left the strictly-hyperbolic region");
    }
    double worst = 0.0;
    Eigen::VectorXd res(n);
    for (int i = 0; i < n; ++i) {
      res[i] = r_target[i] - r[i];
      worst = std::max(worst, std::abs(res[i]));
    }
    if (worst <= tol) return u;
    Eigen::MatrixXd J = riemann_jacobian(u);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    Eigen::VectorXd step = lu.solve(res);
    if (!step.allFinite()) fail(errc::no_convergence, "invariant inversion produced a non-finite step");
    for (int k = 0; k < n; ++k) u[k] += step[k];
    if (metric_g(u) <= 0.0)
      fail(errc::no_convergence, "invariant inversion left the admissible region (g <= 0)");
  }
  fail(errc::no_convergence, "invariant inversion did not converge within the iteration budget");
}

Eigen::MatrixXd lambda_sensitivity(const FieldPoint& u, double h) {
  if (h <= 0.0) fail(errc::domain_error, "FD step must be positive");
  Spectrum sp = require_strictly_hyperbolic(u);
  if (sp.min_gap < 10.0 * h)
    fail(errc::classification_error,
         "eigenvalue separation " + std::to_string(sp.min_gap) +
             " is below the 10x FD-step margin");
  int n = degree(u);
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = eval_integral_angle(u, sp.phi[i]);

  Eigen::MatrixXd S(n, n); // S(i,j) = d lambda_i / d r_j
  for (int j = 0; j < n; ++j) {
    std::vector<double> rp = r, rm = r;
    rp[j] += h;
    rm[j] -= h;
    Spectrum sp_p = spectrum(invert_riemann_map(rp, u));
    Spectrum sp_m = spectrum(invert_riemann_map(rm, u));
    if (sp_p.cls != Hyperbolicity::strictly_hyperbolic ||
        sp_m.cls != Hyperbolicity::strictly_hyperbolic)
      fail(errc::classification_error, "hyperbolicity lost under the FD perturbation");
    for (int i = 0; i < n; ++i) S(i, j) = (sp_p.lambda[i] - sp_m.lambda[i]) / (2.0 * h);
  }
  return S;
}

namespace {

// B(i,j) = (d lambda_j / d r_i) / (lambda_i - lambda_j), i != j.
Eigen::MatrixXd b_matrix(const FieldPoint& u, double h) {
  Eigen::MatrixXd S = lambda_sensitivity(u, h);
  Spectrum sp = spectrum(u);
  int n = degree(u);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) B(i, j) = S(j, i) / (sp.lambda[i] - sp.lambda[j]);
  return B;
}

} // namespace

std::vector<RichnessEntry> richness_residual(const FieldPoint& u, double h) {
  Spectrum sp = require_strictly_hyperbolic(u);
  int n = degree(u);
  std::vector<RichnessEntry> out;
  if (n < 3) return out; // no triples of distinct indices

  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = eval_integral_angle(u, sp.phi[i]);

  std::vector<Eigen::MatrixXd> Bp(n), Bm(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> rp = r, rm = r;
    rp[k] += h;
    rm[k] -= h;
    Bp[k] = b_matrix(invert_riemann_map(rp, u), h);
    Bm[k] = b_matrix(invert_riemann_map(rm, u), h);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        double dk_bij = (Bp[k](i, j) - Bm[k](i, j)) / (2.0 * h);
        double di_bkj = (Bp[i](k, j) - Bm[i](k, j)) / (2.0 * h);
        out.push_back({i, j, k, dk_bij - di_bkj});
      }
    }
  return out;
}

double richness_residual_max(const FieldPoint& u, double h) {
  double worst = 0.0;
  for (const RichnessEntry& e : richness_residual(u, h))
    worst = std::max(worst, std::abs(e.value));
  return worst;
}

std::vector<GnRecord> gn_scan(const FieldPoint& base, const std::vector<double>& direction,
                              double s0, double s1, int nodes, double h, int refine) {
  validate_point(base);
  int n = degree(base);
  if (static_cast<int>(direction.size()) != n)
    fail(errc::arity_error, "scan direction does not match the field degree");
  if (nodes < 2) fail(errc::arity_error, "scan needs at least 2 nodes");

  auto at = [&](double s) {
    FieldPoint u = base;
    for (int k = 0; k < n; ++k) u[k] += s * direction[k];
    return u;
  };
  auto indicators = [&](double s) {
    Eigen::MatrixXd S = lambda_sensitivity(at(s), h);
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = S(i, i);
    return d;
  };

  std::vector<GnRecord> records;
  auto emit = [&](double s, const std::vector<double>& ind) {
    for (int i = 0; i < n; ++i) records.push_back({s, at(s), i, ind[i], h});
  };

  std::vector<double> prev = indicators(s0);
  emit(s0, prev);
  double sprev = s0;
  for (int node = 1; node < nodes; ++node) {
    double s = s0 + (s1 - s0) * node / (nodes - 1);
    std::vector<double> cur = indicators(s);
    emit(s, cur);
    for (int i = 0; i < n; ++i) {
      if (prev[i] == 0.0 || cur[i] == 0.0) continue;
      if ((prev[i] > 0) == (cur[i] > 0)) continue;
      // Bisection refinement of the sign change of field i.
      double lo = sprev, hi = s, flo = prev[i];
      for (int b = 0; b < refine; ++b) {
        double mid = 0.5 * (lo + hi);
        std::vector<double> im = indicators(mid);
        records.push_back({mid, at(mid), i, im[i], h});
        if ((im[i] > 0) == (flo > 0)) {
          lo = mid;
          flo = im[i];
        } else {
          hi = mid;
        }
      }
    }
    prev = std::move(cur);
    sprev = s;
  }
  return records;
}

} // namespace torusflow
