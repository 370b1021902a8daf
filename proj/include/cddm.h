/* C interface to the coupled drift-diffusion decision toolkit.
 *
 * Conventions:
 *   - Every fallible function returns an int status: 0 on success, otherwise
 *     a stable nonzero code (see CDDM_STATUS_* below). 100 marks an
 *     unexpected internal error. cddm_last_error() returns a thread-local
 *     message for the most recent failure on the calling thread.
 *   - Objects returned through cddm_*& out parameters are owned by the
 *     caller and released with the matching cddm_*_free function. Strings
 *     returned through char** are released with cddm_string_free.
 *   - Node indices are 0-based here; the command-line tool shifts to 1-based
 *     at its own surface.
 */
#ifndef CDDM_H
#define CDDM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CDDM_STATUS_OK 0
#define CDDM_STATUS_INVALID_ARGUMENT 1
#define CDDM_STATUS_INVALID_EDGE 2
#define CDDM_STATUS_DISCONNECTED_GRAPH 3
#define CDDM_STATUS_GENERATION_FAILURE 4
#define CDDM_STATUS_EIGEN_FAILURE 5
#define CDDM_STATUS_DOMAIN_OVERFLOW 6
#define CDDM_STATUS_NO_ROOT 7
#define CDDM_STATUS_SOLVER_DIVERGENCE 8
#define CDDM_STATUS_OUT_OF_DOMAIN 9
#define CDDM_STATUS_INVALID_REGIME 10
#define CDDM_STATUS_DEGENERATE_ER 11
#define CDDM_STATUS_TOO_MANY_TIMEOUTS 12
#define CDDM_STATUS_IO_ERROR 13
#define CDDM_STATUS_PARSE_ERROR 14
#define CDDM_STATUS_INTERNAL 100

typedef struct cddm_graph cddm_graph;
typedef struct cddm_model cddm_model;
typedef struct cddm_outcomes cddm_outcomes;
typedef struct cddm_pde cddm_pde;
typedef struct cddm_estimate cddm_estimate;
typedef struct cddm_regression cddm_regression;
typedef struct cddm_table cddm_table;

const char* cddm_version(void);
const char* cddm_status_name(int status);
/* message for the most recent failure on this thread ("" if none) */
const char* cddm_last_error(void);
void cddm_string_free(char* s);
/* shortest round-trip decimal form; needs cap >= 32 */
int cddm_format_double(double v, char* buf, int cap);

/* ---- graphs ------------------------------------------------------------ */

int cddm_graph_paper9(cddm_graph** out);
int cddm_graph_erdos_renyi(int n, double p, uint64_t seed, cddm_graph** out);
int cddm_graph_from_edge_list(const char* text, cddm_graph** out);
int cddm_graph_load(const char* path, cddm_graph** out);
int cddm_graph_to_edge_list(const cddm_graph* g, char** out);
int cddm_graph_save(const cddm_graph* g, const char* path);
int cddm_graph_n(const cddm_graph* g, int* out);
/* lambda: n ascending eigenvalues; U: n*n row-major, U[k*n+p] = entry k of
 * eigenvector p. Either pointer may be NULL to skip. */
int cddm_graph_spectrum(const cddm_graph* g, double* lambda, double* U);
int cddm_graph_certainty(const cddm_graph* g, double* mu);
int cddm_graph_ou_certainty(const cddm_graph* g, double theta, double* mu);
/* steady-state correlation between the node's consensus error and its
 * one-dimensional surrogate */
int cddm_error_correlation(const cddm_graph* g, int node, double* out);
void cddm_graph_free(cddm_graph* g);

/* ---- exact Gaussian moments --------------------------------------------
 * kind: 0 coupled DDM (param = sigma), 1 error dynamics (param unused),
 * 2 coupled O-U (param = theta). mean: n_times*n, cov: n_times*n*n, both
 * row-major with time slowest; either may be NULL. */
int cddm_moments(const cddm_graph* g, int kind, double beta, double param,
                 const double* times, int n_times, double* mean, double* cov);

/* ---- model construction ------------------------------------------------ */

int cddm_model_coupled_ddm(const cddm_graph* g, double beta, double sigma, cddm_model** out);
int cddm_model_centralized_ddm(int n, double beta, cddm_model** out);
int cddm_model_error_dynamics(const cddm_graph* g, cddm_model** out);
int cddm_model_reduced_ddm(double mu, double beta, int n, cddm_model** out);
int cddm_model_coupled_ou(const cddm_graph* g, double beta, double theta, cddm_model** out);
int cddm_model_reduced_ou(double mu_hat, double beta, double theta, int n, cddm_model** out);
/* beta: one drift per alternative (m >= 2) */
int cddm_model_coupled_race(const cddm_graph* g, const double* beta, int m, double sigma,
                            cddm_model** out);
int cddm_model_from_json(const char* text, cddm_model** out);
int cddm_model_to_json(const cddm_model* m, char** out);
int cddm_model_dim(const cddm_model* m, int* out);
int cddm_model_nodes(const cddm_model* m, int* out);
int cddm_model_alternatives(const cddm_model* m, int* out);
void cddm_model_free(cddm_model* m);

/* ---- simulation --------------------------------------------------------
 * rule kinds: 0 none (run to max_t), 1 symmetric +-eta, 2 upper only,
 * 3 race margin. n_eta must be n_nodes (per-node thresholds) or 1
 * (broadcast). crossing: 0 step-grid detection, 1 Brownian-bridge
 * correction (not available for race rules). */
typedef struct cddm_rule {
  int kind;
  const int* nodes;
  int n_nodes;
  const double* eta;
  int n_eta;
} cddm_rule;

typedef struct cddm_sim_params {
  double dt;
  double max_t;
  int64_t trials;
  uint64_t seed;
  int crossing;
  int threads; /* results do not depend on this */
} cddm_sim_params;

/* decision: 1 upper / 0 lower boundary; race: winning alternative id;
 * -1 timeout */
typedef struct cddm_outcome {
  int64_t trial;
  int32_t node;
  int32_t decision;
  double time;
  int64_t steps;
} cddm_outcome;

int cddm_run_ensemble(const cddm_model* m, const cddm_rule* rule, const cddm_sim_params* p,
                      cddm_outcomes** out);
int cddm_outcomes_count(const cddm_outcomes* o, int64_t* out);
int cddm_outcomes_get(const cddm_outcomes* o, int64_t i, cddm_outcome* out);
/* header: trial,node,decision,decision_time,steps (0-based nodes) */
int cddm_outcomes_csv(const cddm_outcomes* o, char** out);
void cddm_outcomes_free(cddm_outcomes* o);
/* Euler path from the zero state; out is (steps+1)*dim row-major */
int cddm_simulate_path(const cddm_model* m, double dt, int steps, uint64_t seed, int64_t trial,
                       double* out);

/* ---- scalar first-passage analysis ------------------------------------- */

/* expected exit time and error rate of dx = beta dt + sigma dW from
 * (-eta, eta) */
int cddm_ddm_performance(double beta, double sigma, double eta, double* et, double* er);
int cddm_exp_square_integral(double z, double* out);
int cddm_exp_square_erf_integral(double z, double* out);
int cddm_ou_mean_fpt(double mu, double eta, double* out);
int cddm_ou_fpt_density(double mu, double eta, double t, double* out);
int cddm_ou_mean_fpt_bounds(double mu, double eta, double* low, double* high);
int cddm_ou_containment_lower(double K, double mu, double t, double* out);
int cddm_ou_uniform_bound(double K, double mu, double t, int two_sided, double* out);

typedef struct cddm_bounds {
  double et_low;
  double et_high;
  double er_low;
  double er_high;
  double confidence;
  double K;
} cddm_bounds;

int cddm_reduced_performance_bounds(double eta, double K, double mu, double beta, int n,
                                    cddm_bounds* out);

/* ---- elliptic PDE predictions ------------------------------------------
 * which: 0 mean decision time, 1 error probability. eta_bar <= 0 picks the
 * default 6/sqrt(mu); ny = ne = 0 picks 201x201. */
int cddm_solve_reduced_pde(double mu, double beta, int n, double eta, int which, double eta_bar,
                           int ny, int ne, cddm_pde** out);

typedef struct cddm_pde_info {
  int32_t which;
  int32_t ny;
  int32_t ne;
  double y_lo, y_hi, e_lo, e_hi;
  double residual;
  int64_t sweeps;
} cddm_pde_info;

int cddm_pde_info_get(const cddm_pde* p, cddm_pde_info* out);
/* "" when the solve raised no grid warning; owned by the handle */
const char* cddm_pde_warning(const cddm_pde* p);
int cddm_pde_at(const cddm_pde* p, double y, double eps, double* out);
/* ny*ne row-major, eps fastest */
int cddm_pde_values(const cddm_pde* p, double* out);
int cddm_pde_csv(const cddm_pde* p, char** out);
int cddm_pde_write_binary(const cddm_pde* p, const char* path);
int cddm_pde_read_binary(const char* path, cddm_pde** out);
void cddm_pde_free(cddm_pde* p);
/* one-dimensional check problem; x and v hold npoints entries */
int cddm_solve_ddm_profile(double beta, double sigma, double eta, int which, int npoints,
                           double* x, double* v);

/* ---- threshold selection ------------------------------------------------ */

int cddm_kbar(double beta, double* out);
int cddm_corrected_threshold(double eta, double beta, double mu, double* out);
int cddm_corrected_performance(double eta, double beta, double mu, int n, double* et, double* er);
int cddm_wald_threshold(double alpha, double beta, int n, double mu, double* out);
int cddm_wald_expected_time(double alpha, double beta, int n, double mu, double* out);
int cddm_bayes_threshold(double cost, double beta, int n, double* out);
int cddm_reward_rate_threshold(double D, double Dp, double T_motor, double beta, int n,
                               double* out);
int cddm_race_threshold(int m, double R, double* out);

/* kind: 0 fixed, 1 wald, 2 bayes, 3 reward_rate; unused fields ignored */
typedef struct cddm_policy {
  int kind;
  double eta;
  double alpha;
  double cost;
  double D;
  double Dp;
  double T_motor;
} cddm_policy;

int cddm_apply_policy(const cddm_policy* policy, const double* mu, int n_mu, double beta, int n,
                      double* out_eta);

/* ---- experiment harness ------------------------------------------------- */

typedef struct cddm_perf {
  int32_t node;
  int64_t trials;
  int64_t decided;
  double er_hat, er_se;
  double et_hat, et_se;
  double timeout_fraction;
  int32_t bins;
} cddm_perf;

int cddm_estimate_performance(const cddm_model* m, const cddm_rule* rule, int node,
                              int64_t trials, double dt, double max_t, uint64_t seed,
                              int crossing, int threads, cddm_estimate** out);
int cddm_estimate_info(const cddm_estimate* e, cddm_perf* out);
/* edges: bins+1, counts: bins (sizes from cddm_estimate_info) */
int cddm_estimate_histogram(const cddm_estimate* e, double* edges, int64_t* counts);
int cddm_estimate_histogram_csv(const cddm_estimate* e, char** out);
void cddm_estimate_free(cddm_estimate* e);
int cddm_log_likelihood_no_error(double er, double* out);

int cddm_correction_experiment(double beta, double eta, int graph_count, int64_t trials_per_node,
                               uint64_t seed, double dt, int crossing, int threads,
                               cddm_regression** out);
int cddm_regression_info(const cddm_regression* r, double* slope, double* residual_rms,
                         int64_t* n_points);
int cddm_regression_points(const cddm_regression* r, double* x, double* y);
int cddm_regression_csv(const cddm_regression* r, char** out);
void cddm_regression_free(cddm_regression* r);

int cddm_compare_models(const cddm_graph* g, int node, double beta, const double* etas,
                        int n_etas, int64_t trials, uint64_t seed, double dt, double max_t,
                        int crossing, int threads, cddm_table** out);
int cddm_table_rows(const cddm_table* t, int64_t* out);
/* model must hold at least 16 bytes */
int cddm_table_row(const cddm_table* t, int64_t i, double* eta, char* model, double* er,
                   double* et);
int cddm_table_csv(const cddm_table* t, char** out);
void cddm_table_free(cddm_table* t);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CDDM_H */
