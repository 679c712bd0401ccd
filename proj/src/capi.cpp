#include "torusflow.h"

#include <exception>
#include <new>
#include <string>

#include "torusflow/claws.hpp"
#include "torusflow/errors.hpp"
#include "torusflow/runner.hpp"
#include "torusflow/spectral.hpp"
#include "torusflow/system.hpp"
#include "torusflow/version.hpp"

struct tf_session {
  std::string last_error;
};

namespace {

using torusflow::errc;
using torusflow::Error;
using torusflow::FieldPoint;

int status_of(const Error& e) {
  return e.code() == errc::config_error ? TF_ERR_CONFIG : TF_ERR_RUNTIME;
}

template <typename Fn> int guarded(tf_session* s, Fn&& fn) {
  if (!s) return TF_ERR_INVALID_ARG;
  s->last_error.clear();
  try {
    return fn();
  } catch (const Error& e) {
    s->last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return TF_ERR_RUNTIME;
  } catch (...) {
    s->last_error = "unknown failure";
    return TF_ERR_RUNTIME;
  }
}

bool bad_point(int n, const double* u) { return n < 2 || !u; }

FieldPoint to_point(int n, const double* u) { return FieldPoint(u, u + n); }

} // namespace

extern "C" {

const char* tf_version(void) { return torusflow::version_string; }

tf_session* tf_session_create(void) { return new (std::nothrow) tf_session(); }

void tf_session_destroy(tf_session* s) { delete s; }

const char* tf_last_error(const tf_session* s) { return s ? s->last_error.c_str() : ""; }

int tf_run(tf_session* s, const char* command, const char* config_json, const char* out_dir) {
  if (!command || !config_json || !out_dir) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    torusflow::run_command(command, config_json, out_dir);
    return TF_OK;
  });
}

int tf_build_matrix(tf_session* s, int n, const double* u, double* a_out) {
  if (bad_point(n, u) || !a_out) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    Eigen::MatrixXd A = torusflow::build_matrix(to_point(n, u));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a_out[i * n + j] = A(i, j);
    return TF_OK;
  });
}

int tf_eval_integral_angle(tf_session* s, int n, const double* u, double phi, double* out) {
  if (bad_point(n, u) || !out) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    *out = torusflow::eval_integral_angle(to_point(n, u), phi);
    return TF_OK;
  });
}

int tf_eval_integral_p(tf_session* s, int n, const double* u, double p, double* out) {
  if (bad_point(n, u) || !out) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    *out = torusflow::eval_integral_p(to_point(n, u), p);
    return TF_OK;
  });
}

int tf_char_poly(tf_session* s, int n, const double* u, double* c_out) {
  if (bad_point(n, u) || !c_out) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    std::vector<double> c = torusflow::char_poly(to_point(n, u));
    for (int i = 0; i <= n; ++i) c_out[i] = c[i];
    return TF_OK;
  });
}

int tf_spectrum(tf_session* s, int n, const double* u, double tol_sep, double* lambda_out,
                double* phi_out, int* classification_out) {
  if (bad_point(n, u) || !lambda_out || !phi_out || !classification_out)
    return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    torusflow::Spectrum sp = torusflow::spectrum(to_point(n, u), tol_sep);
    for (int i = 0; i < n; ++i) {
      lambda_out[i] = sp.lambda[i];
      phi_out[i] = sp.phi[i];
    }
    switch (sp.cls) {
    case torusflow::Hyperbolicity::strictly_hyperbolic:
      *classification_out = TF_CLASS_STRICTLY_HYPERBOLIC;
      break;
    case torusflow::Hyperbolicity::degenerate:
      *classification_out = TF_CLASS_DEGENERATE;
      break;
    case torusflow::Hyperbolicity::elliptic:
      *classification_out = TF_CLASS_ELLIPTIC;
      break;
    }
    return TF_OK;
  });
}

int tf_riemann_invariants(tf_session* s, int n, const double* u, double* r_out) {
  if (bad_point(n, u) || !r_out) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    std::vector<double> r = torusflow::riemann_invariants(to_point(n, u));
    for (int i = 0; i < n; ++i) r_out[i] = r[i];
    return TF_OK;
  });
}

int tf_series_claws(tf_session* s, int n, const double* u, int order, double* g_out,
                    double* flux_out) {
  if (bad_point(n, u) || !g_out || !flux_out || order < 2) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    torusflow::CLawSeries cs = torusflow::series_claws(to_point(n, u), order);
    for (int i = 0; i < order - 1; ++i) g_out[i] = cs.G[i];
    for (int i = 0; i <= order; ++i) flux_out[i] = cs.flux[i];
    return TF_OK;
  });
}

int tf_torus_graph(tf_session* s, int n, const double* u, double c, double* f_out,
                   double* flux_out) {
  if (bad_point(n, u) || !f_out || !flux_out) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    torusflow::GraphPoint gp = torusflow::torus_graph(to_point(n, u), c);
    *f_out = gp.f;
    *flux_out = gp.flux;
    return TF_OK;
  });
}

int tf_richness_residual_max(tf_session* s, int n, const double* u, double h, double* out) {
  if (bad_point(n, u) || !out) return TF_ERR_INVALID_ARG;
  return guarded(s, [&] {
    *out = torusflow::richness_residual_max(to_point(n, u), h);
    return TF_OK;
  });
}

} /* extern "C" */
