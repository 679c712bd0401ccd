/* torusflow C API: opaque session handle, integer status codes.
 *
 * Every function except tf_version and tf_session_create returns a status:
 *   TF_OK               success
 *   TF_ERR_RUNTIME      computation failed (see tf_last_error)
 *   TF_ERR_CONFIG       config parse/validation failed
 *   TF_ERR_INVALID_ARG  null pointer / malformed argument sizes
 * Output buffers are caller-allocated; sizes are stated per function.
 */
#ifndef TORUSFLOW_H
#define TORUSFLOW_H

#ifdef __cplusplus
extern "C" {
#endif

#define TF_OK 0
#define TF_ERR_RUNTIME 1
#define TF_ERR_CONFIG 2
#define TF_ERR_INVALID_ARG 3

/* Classification of the characteristic spectrum at a point. */
#define TF_CLASS_STRICTLY_HYPERBOLIC 0
#define TF_CLASS_DEGENERATE 1
#define TF_CLASS_ELLIPTIC 2

typedef struct tf_session tf_session;

/* Version string, e.g. "torusflow 1.0.0"; static storage. */
const char* tf_version(void);

tf_session* tf_session_create(void);
void tf_session_destroy(tf_session* s);

/* Message of the last failed call on this session; empty string if none.
 * Valid until the next call on the same session. */
const char* tf_last_error(const tf_session* s);

/* Run one CLI-level command ("validate", "spectrum", "claws", "evolve",
 * "trace", "geodesics", "gn-scan", "rich-check") with a JSON config text,
 * writing report files into out_dir. */
int tf_run(tf_session* s, const char* command, const char* config_json, const char* out_dir);

/* System matrix, row-major n*n into a_out. */
int tf_build_matrix(tf_session* s, int n, const double* u, double* a_out);

/* Integral in the angle chart. */
int tf_eval_integral_angle(tf_session* s, int n, const double* u, double phi, double* out);

/* Integral in the p chart (cos >= 0 branch), |p| <= 1. */
int tf_eval_integral_p(tf_session* s, int n, const double* u, double p, double* out);

/* Monic characteristic polynomial, ascending coefficients into c_out[n+1]. */
int tf_char_poly(tf_session* s, int n, const double* u, double* c_out);

/* Eigenvalues (sorted ascending), fiber angles, and classification.
 * tol_sep <= 0 selects the default separation tolerance.
 * lambda_out[n], phi_out[n] (real parts; angles meaningful when strictly
 * hyperbolic), classification_out one TF_CLASS_* value. */
int tf_spectrum(tf_session* s, int n, const double* u, double tol_sep, double* lambda_out,
                double* phi_out, int* classification_out);

/* r_i = F(phi_i) into r_out[n]; requires strict hyperbolicity. */
int tf_riemann_invariants(tf_session* s, int n, const double* u, double* r_out);

/* Level-curve series of order K >= 2: g_out[K-1] receives G_2..G_K and
 * flux_out[K+1] the flux series coefficients. */
int tf_series_claws(tf_session* s, int n, const double* u, int order, double* g_out,
                    double* flux_out);

/* Graph value f and branch-signed flux on level c. */
int tf_torus_graph(tf_session* s, int n, const double* u, double c, double* f_out,
                   double* flux_out);

/* Max cross-derivative compatibility defect at FD step h. */
int tf_richness_residual_max(tf_session* s, int n, const double* u, double h, double* out);

#ifdef __cplusplus
}
#endif

#endif /* TORUSFLOW_H */
