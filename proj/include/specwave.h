/* specwave: spectral solver for damped wave equations driven by a positive
 * operator with known discrete spectrum.
 *
 * C interface over the C++ core. All functions return sw_status; outputs are
 * caller-allocated buffers sized via the query functions. Real-valued data
 * only; the C++ headers expose the complex-capable core. On any status other
 * than SW_OK, sw_last_error() returns a thread-local description.
 */
#ifndef SPECWAVE_H
#define SPECWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPECWAVE_API __declspec(dllexport)
#else
#define SPECWAVE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status {
  SW_OK = 0,
  SW_ERR_INVALID_ARGUMENT = 1,
  SW_ERR_DIMENSION_MISMATCH = 2,
  SW_ERR_ASSUMPTION_VIOLATION = 3, /* b > 0 or lambda0 + m > 0 fails */
  SW_ERR_SINGULAR = 4,             /* negative power / weight on a zero eigenvalue */
  SW_ERR_UNSUPPORTED = 5,
  SW_ERR_DIVERGENCE = 6, /* fixed-point iteration failed to contract */
  SW_ERR_VALIDATION = 7,
  SW_ERR_FIT_FAILURE = 8,
  SW_ERR_INCONCLUSIVE = 9,
  SW_ERR_IO = 10,
  SW_ERR_INTERNAL = 11,
} sw_status;

/* Thread-local message for the most recent failure on this thread. */
SPECWAVE_API const char* sw_last_error(void);

/* After SW_ERR_DIVERGENCE on this thread: the contraction ratios recorded up
 * to the abort, for diagnostics. Returns the count and copies the first
 * min(count, cap) values into out when out is non-NULL. Cleared by any other
 * failure. */
SPECWAVE_API size_t sw_last_divergence_ratios(double* out, size_t cap);

/* Worker count for per-mode / per-trial loops; results are identical at any
 * count. Values < 1 mean 1. */
SPECWAVE_API void sw_set_threads(int count);
SPECWAVE_API int sw_get_threads(void);

/* ---------------------------------------------------------------- bases -- */

typedef struct sw_basis sw_basis;

/* -Delta + |x|^2 on R^dim, tensor Hermite functions. quadrature_size 0 picks
 * max_degree + 1 points per axis. */
SPECWAVE_API sw_status sw_basis_harmonic_oscillator(int dimension, int max_degree,
                                                    int quadrature_size, sw_basis** out);

/* Laplacian on the flat torus; grid_size 0 picks 2 * max_frequency + 1 points
 * per axis. Bottom eigenvalue is 0: pair with a positive mass term. */
SPECWAVE_API sw_status sw_basis_torus(int dimension, int max_frequency, int grid_size,
                                      sw_basis** out);

/* User-supplied eigenpairs. table is mode-major (mode_count x node_count),
 * nodes is node-major (node_count x dimension). Rejected unless orthonormal
 * under the weights within gram_tolerance (pass 0 for the default 1e-8). */
SPECWAVE_API sw_status sw_basis_explicit(int dimension, int mode_count, int node_count,
                                         const double* eigenvalues, const double* table,
                                         const double* nodes, const double* weights,
                                         int bottom_is_infimum, double gram_tolerance,
                                         sw_basis** out);

SPECWAVE_API sw_status sw_basis_load(const char* path, sw_basis** out);
SPECWAVE_API sw_status sw_basis_save(const sw_basis* basis, const char* path);
SPECWAVE_API void sw_basis_free(sw_basis* basis);

SPECWAVE_API int sw_basis_dimension(const sw_basis* basis);
SPECWAVE_API int sw_basis_mode_count(const sw_basis* basis);
SPECWAVE_API int sw_basis_node_count(const sw_basis* basis);
SPECWAVE_API sw_status sw_basis_eigenvalues(const sw_basis* basis, double* out);
SPECWAVE_API sw_status sw_basis_nodes(const sw_basis* basis, double* out); /* node-major */
SPECWAVE_API sw_status sw_basis_weights(const sw_basis* basis, double* out);
SPECWAVE_API double sw_basis_gram_defect(const sw_basis* basis);
/* Smallest retained eigenvalue; *is_infimum (nullable) reports whether the
 * truncation preserves the true bottom of the spectrum. */
SPECWAVE_API double sw_basis_bottom(const sw_basis* basis, int* is_infimum);

/* ------------------------------------------------------------ transforms -- */

SPECWAVE_API sw_status sw_forward_transform(const sw_basis* basis, const double* values,
                                            double* coeffs);
SPECWAVE_API sw_status sw_inverse_transform(const sw_basis* basis, const double* coeffs,
                                            double* values);
SPECWAVE_API sw_status sw_h_norm(const sw_basis* basis, const double* coeffs, double* out);
SPECWAVE_API sw_status sw_sobolev_norm(const sw_basis* basis, const double* coeffs, double s,
                                       double* out);
SPECWAVE_API sw_status sw_grid_norm(const sw_basis* basis, const double* values, double* out);
/* Coefficientwise product: transform of the operator-adapted convolution. */
SPECWAVE_API sw_status sw_l_convolution(const sw_basis* basis, const double* a, const double* b,
                                        double* out);
SPECWAVE_API sw_status sw_apply_l_power(const sw_basis* basis, const double* coeffs, double beta,
                                        double* out);
SPECWAVE_API sw_status sw_projection_residual(const sw_basis* basis, const double* values,
                                              double* out);

/* ------------------------------------------------------------ propagator -- */

/* Closed-form solution of u'' + (lambda + m) u + b u' = 0 at time t >= 0. */
SPECWAVE_API sw_status sw_mode_solution(double lambda, double b, double m, double u0, double u1,
                                        double t, double* u, double* ut);

/* Fundamental kernels with (r0, r0') = (1, 0), (r1, r1') = (0, 1) at t = 0,
 * and their exact time derivatives. Any output pointer may be NULL. */
SPECWAVE_API sw_status sw_mode_kernels(double lambda, double b, double m, double t, double* r0,
                                       double* r1, double* r0_dot, double* r1_dot);

/* Decay envelope (1+t)^q e^(-gamma t): gamma and q from the position of b
 * relative to 2 sqrt(lambda0 + m); nonlinear != 0 selects the small-data
 * fixed-point exponents. */
SPECWAVE_API sw_status sw_classify_decay(double b, double m, double lambda0, int alpha,
                                         double beta, int nonlinear, double* gamma, double* q);

/* Homogeneous solve at n_times sample times (each >= 0). u_out / ut_out are
 * row-major n_times x mode_count; either may be NULL. */
SPECWAVE_API sw_status sw_solve_linear(const sw_basis* basis, double b, double m,
                                       const double* u0, const double* u1, const double* times,
                                       size_t n_times, double* u_out, double* ut_out);

/* (|u_t|^2 + |L^(1/2) u|^2 + m |u|^2) / 2; signed if m < 0. */
SPECWAVE_API sw_status sw_energy(const sw_basis* basis, double b, double m, const double* u,
                                 const double* ut, double* out);

/* ------------------------------------------------------------- nonlinear -- */

typedef struct sw_picard sw_picard;

typedef enum sw_nonlinearity_kind {
  SW_NONLINEARITY_NONE = 0,  /* linear problem */
  SW_NONLINEARITY_POWER = 1, /* F(u) = mu |u|^(p-1) u pointwise */
  SW_NONLINEARITY_NORM = 2,  /* F(U) = mu phi |U|^p, phi a coefficient vector */
} sw_nonlinearity_kind;

typedef struct sw_nonlinearity {
  int kind;          /* sw_nonlinearity_kind */
  double p;          /* power / admissibility index, >= 1 */
  double mu;         /* coupling */
  const double* phi; /* NORM only: mode_count coefficients of the profile */
  int order;         /* NORM only: 1 = (u, u_t, L^(1/2)u), 2 = adds u_tt, L u */
  int first_order_scale; /* NORM, order 1 only: measure U in the first-order
                            metric |L^(1/2)u| + |L^(1/2)u_t| + |L u| instead of
                            the plain one */
} sw_nonlinearity;

typedef struct sw_picard_options {
  double tolerance;           /* <= 0 picks 1e-10 */
  int max_iterations;         /* <= 0 picks 25 */
  double smallness_threshold; /* <= 0 picks 1e-2 */
  double smallness_sigma;     /* < 1 picks 1 */
  int keep_iterates;
} sw_picard_options;

/* Fixed-point solve from the closed-form linear iterate on a strictly
 * increasing grid starting at 0. SW_ERR_DIVERGENCE after three consecutive
 * increment growths; non-convergence within max_iterations is NOT an error
 * (query sw_picard_converged). options may be NULL for all defaults. */
SPECWAVE_API sw_status sw_picard_solve(const sw_basis* basis, double b, double m,
                                       const sw_nonlinearity* nonlinearity, const double* u0,
                                       const double* u1, const double* times, size_t n_times,
                                       const sw_picard_options* options, sw_picard** out);
SPECWAVE_API void sw_picard_free(sw_picard* run);

SPECWAVE_API int sw_picard_converged(const sw_picard* run);
SPECWAVE_API int sw_picard_iterations(const sw_picard* run);
SPECWAVE_API size_t sw_picard_time_count(const sw_picard* run);
/* Final trajectory at sample index i; u / ut hold mode_count entries, either
 * may be NULL. */
SPECWAVE_API sw_status sw_picard_state(const sw_picard* run, size_t index, double* u, double* ut);
SPECWAVE_API size_t sw_picard_increment_count(const sw_picard* run);
SPECWAVE_API sw_status sw_picard_increments(const sw_picard* run, double* out);
/* increment_count - 1 values: increments[k] / increments[k-1]. */
SPECWAVE_API sw_status sw_picard_contraction_ratios(const sw_picard* run, double* out);
/* Weight-1 decay-weighted sup norms, one per stored iterate
 * (iterations + 1 values including the linear start). */
SPECWAVE_API sw_status sw_picard_iterate_z_norms(const sw_picard* run, double* out);
SPECWAVE_API sw_status sw_picard_smallness(const sw_picard* run, double* epsilon, double* sigma,
                                           double* threshold, int* within);
/* Envelope exponents used for the run and the measured sup of
 * (|u| + |u_t| + |L^(1/2)u|) / envelope. */
SPECWAVE_API sw_status sw_picard_envelope(const sw_picard* run, double* gamma, double* q,
                                          double* fitted_c);
/* Decay-weighted sup norm of the final trajectory with derivative weight
 * `weight` (uses the stored source; weight >= 3 with a nonlinear source is
 * unsupported). */
SPECWAVE_API sw_status sw_picard_z_norm(const sw_picard* run, int weight, double* out);

/* epsilon = |u0|_{H^sigma} + |u1|_{H^(sigma-1)} vs threshold (advisory). */
SPECWAVE_API sw_status sw_smallness_check(const sw_basis* basis, const double* u0,
                                          const double* u1, double sigma, double threshold,
                                          double* epsilon, int* within);

/* -------------------------------------------------------------- analysis -- */

typedef enum sw_operator_family {
  SW_FAMILY_HARMONIC_OSCILLATOR = 0,
  SW_FAMILY_COMPACT_MANIFOLD = 1,
  SW_FAMILY_TWISTED = 2,
} sw_operator_family;

/* Interpolation-inequality admissibility of exponent p in dimension n.
 * exponent (nullable) receives n(p-1)/(2p), or n(p-1)/p for the twisted
 * family, when admissible. */
SPECWAVE_API sw_status sw_gn_admissible(int family, int dimension, double p, int* admissible,
                                        double* exponent);

/* Least squares of log v = log C + q log(1+t) - gamma t over the trailing
 * tail_fraction (pass 0 for the default 0.6) of the samples; gamma clamped
 * to >= 0. residual is the rms log-space misfit (nullable). */
SPECWAVE_API sw_status sw_fit_envelope(const double* times, const double* values, size_t count,
                                       double tail_fraction, double* gamma, double* q, double* c,
                                       double* residual);

/* Random coefficient pairs vs the Young-type constant sup_xi |e_xi|_L1. */
SPECWAVE_API sw_status sw_convolution_probe(const sw_basis* basis, int trials, uint64_t seed,
                                            double* max_ratio, double* sup_e_l1);

/* ---------------------------------------------------------------- oracle -- */

/* Fixed-step RK4 for one mode; shares nothing with the closed forms. */
SPECWAVE_API sw_status sw_rk4_mode(double lambda, double b, double m, double u0, double u1,
                                   double t_end, double dt, double* u, double* ut);

/* Solves the scenario with the closed-form / fixed-point path, then checks it
 * against a self-certifying RK4 reference (dt halved until two references
 * agree to tolerance/10, floor 1e-5). conclusive = 0 means the floor was hit
 * first; pass is meaningful only when conclusive. */
SPECWAVE_API sw_status sw_compare_oracle(const sw_basis* basis, double b, double m,
                                         const sw_nonlinearity* nonlinearity, const double* u0,
                                         const double* u1, const double* times, size_t n_times,
                                         double tolerance, double initial_dt, int* conclusive,
                                         int* pass, double* discrepancy, double* dt_used);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPECWAVE_H */
