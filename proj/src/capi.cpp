#include "cddm.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "core/analysis.hpp"
#include "core/experiments.hpp"
#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/moments.hpp"
#include "core/num_format.hpp"
#include "core/pde.hpp"
#include "core/simulate.hpp"
#include "core/status.hpp"
#include "core/thresholds.hpp"
#include "core/version.hpp"

struct cddm_graph {
  cddm::Graph g;
};
struct cddm_model {
  cddm::ModelSpec m;
};
struct cddm_outcomes {
  std::vector<cddm::TrialOutcome> v;
};
struct cddm_pde {
  cddm::PdeSolution s;
};
struct cddm_estimate {
  cddm::PerformanceEstimate e;
};
struct cddm_regression {
  cddm::CorrectionRegression r;
};
struct cddm_table {
  std::vector<cddm::CompareRow> rows;
};

namespace {

using cddm::Status;

thread_local std::string g_error;

// Exceptions never cross the C boundary: library errors keep their stable
// status value, anything else degrades to CDDM_STATUS_INTERNAL.
template <typename F>
int guarded(F&& fn) noexcept {
  try {
    fn();
    g_error.clear();
    return CDDM_STATUS_OK;
  } catch (const cddm::Error& e) {
    g_error = e.what();
    return static_cast<int>(e.status());
  } catch (const std::exception& e) {
    g_error = e.what();
    return CDDM_STATUS_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return CDDM_STATUS_INTERNAL;
  }
}

void need(bool cond, const char* what) {
  if (!cond) cddm::fail(Status::invalid_argument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cddm::StoppingRule to_rule(const cddm_rule* rule) {
  need(rule != nullptr, "null rule");
  if (rule->kind == 0) return cddm::StoppingRule::none();
  need(rule->nodes != nullptr && rule->n_nodes > 0, "rule: missing node list");
  need(rule->eta != nullptr && rule->n_eta > 0, "rule: missing thresholds");
  std::vector<int> nodes(rule->nodes, rule->nodes + rule->n_nodes);
  switch (rule->kind) {
    case 1: {
      if (rule->n_eta == 1) return cddm::StoppingRule::symmetric(std::move(nodes), rule->eta[0]);
      need(rule->n_eta == rule->n_nodes, "rule: n_eta must be 1 or n_nodes");
      return cddm::StoppingRule::symmetric(
          std::move(nodes), std::vector<double>(rule->eta, rule->eta + rule->n_eta));
    }
    case 2:
      need(rule->n_eta == 1, "rule: upper rule takes one threshold");
      return cddm::StoppingRule::upper(std::move(nodes), rule->eta[0]);
    case 3:
      need(rule->n_eta == 1, "rule: race rule takes one threshold");
      return cddm::StoppingRule::race_margin(std::move(nodes), rule->eta[0]);
    default:
      cddm::fail(Status::invalid_argument, "rule: kind must be 0..3");
  }
}

cddm::SimParams to_params(const cddm_sim_params* p) {
  need(p != nullptr, "null sim params");
  need(p->crossing == 0 || p->crossing == 1, "crossing must be 0 (grid) or 1 (bridge)");
  cddm::SimParams sp;
  sp.dt = p->dt;
  sp.max_t = p->max_t;
  sp.trials = p->trials;
  sp.seed = p->seed;
  sp.crossing = p->crossing == 0 ? cddm::CrossingMode::grid : cddm::CrossingMode::bridge;
  sp.threads = p->threads;
  return sp;
}

cddm::CrossingMode to_crossing(int crossing) {
  need(crossing == 0 || crossing == 1, "crossing must be 0 (grid) or 1 (bridge)");
  return crossing == 0 ? cddm::CrossingMode::grid : cddm::CrossingMode::bridge;
}

}  // namespace

extern "C" {

const char* cddm_version(void) { return cddm::version_string; }

const char* cddm_status_name(int status) {
  if (status == CDDM_STATUS_INTERNAL) return "internal_error";
  if (status < 0 || status > static_cast<int>(Status::parse_error)) return "unknown";
  return cddm::status_name(static_cast<Status>(status));
}

const char* cddm_last_error(void) { return g_error.c_str(); }

void cddm_string_free(char* s) { std::free(s); }

int cddm_format_double(double v, char* buf, int cap) {
  return guarded([&] {
    need(buf != nullptr, "null buffer");
    const std::string s = cddm::format_double(v);
    need(static_cast<int>(s.size()) < cap, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

/* ---- graphs ------------------------------------------------------------ */

int cddm_graph_paper9(cddm_graph** out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = new cddm_graph{cddm::Graph::paper9()};
  });
}

int cddm_graph_erdos_renyi(int n, double p, uint64_t seed, cddm_graph** out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = new cddm_graph{cddm::Graph::erdos_renyi(n, p, seed)};
  });
}

int cddm_graph_from_edge_list(const char* text, cddm_graph** out) {
  return guarded([&] {
    need(text != nullptr && out != nullptr, "null argument");
    *out = new cddm_graph{cddm::Graph::from_edge_list(text)};
  });
}

int cddm_graph_load(const char* path, cddm_graph** out) {
  return guarded([&] {
    need(path != nullptr && out != nullptr, "null argument");
    *out = new cddm_graph{cddm::Graph::load(path)};
  });
}

int cddm_graph_to_edge_list(const cddm_graph* g, char** out) {
  return guarded([&] {
    need(g != nullptr && out != nullptr, "null argument");
    *out = dup_string(g->g.to_edge_list());
  });
}

int cddm_graph_save(const cddm_graph* g, const char* path) {
  return guarded([&] {
    need(g != nullptr && path != nullptr, "null argument");
    g->g.save(path);
  });
}

int cddm_graph_n(const cddm_graph* g, int* out) {
  return guarded([&] {
    need(g != nullptr && out != nullptr, "null argument");
    *out = g->g.n();
  });
}

int cddm_graph_spectrum(const cddm_graph* g, double* lambda, double* U) {
  return guarded([&] {
    need(g != nullptr, "null graph");
    const cddm::Spectrum s = cddm::spectrum(g->g);
    const int n = s.n();
    if (lambda)
      for (int p = 0; p < n; ++p) lambda[p] = s.lambda(p);
    if (U)
      for (int k = 0; k < n; ++k)
        for (int p = 0; p < n; ++p) U[k * n + p] = s.U(k, p);
  });
}

int cddm_graph_certainty(const cddm_graph* g, double* mu) {
  return guarded([&] {
    need(g != nullptr && mu != nullptr, "null argument");
    const std::vector<double> v = cddm::certainty_indices(cddm::spectrum(g->g));
    std::memcpy(mu, v.data(), v.size() * sizeof(double));
  });
}

int cddm_graph_ou_certainty(const cddm_graph* g, double theta, double* mu) {
  return guarded([&] {
    need(g != nullptr && mu != nullptr, "null argument");
    const std::vector<double> v = cddm::ou_certainty_indices(cddm::spectrum(g->g), theta);
    std::memcpy(mu, v.data(), v.size() * sizeof(double));
  });
}

int cddm_error_correlation(const cddm_graph* g, int node, double* out) {
  return guarded([&] {
    need(g != nullptr && out != nullptr, "null argument");
    *out = cddm::approx_error_correlation(cddm::spectrum(g->g), node);
  });
}

void cddm_graph_free(cddm_graph* g) { delete g; }

/* ---- moments ------------------------------------------------------------ */

int cddm_moments(const cddm_graph* g, int kind, double beta, double param, const double* times,
                 int n_times, double* mean, double* cov) {
  return guarded([&] {
    need(g != nullptr && times != nullptr, "null argument");
    need(n_times > 0, "need at least one time");
    need(kind >= 0 && kind <= 2, "moment kind must be 0 (ddm), 1 (error) or 2 (ou)");
    const std::vector<double> ts(times, times + n_times);
    const cddm::Spectrum s = cddm::spectrum(g->g);
    cddm::MomentCurve c;
    if (kind == 0)
      c = cddm::coupled_ddm_moments(s, beta, param, ts);
    else if (kind == 1)
      c = cddm::error_moments(s, ts);
    else
      c = cddm::coupled_ou_moments(s, beta, param, ts);
    const int n = s.n();
    for (int t = 0; t < n_times; ++t) {
      if (mean)
        for (int k = 0; k < n; ++k) mean[t * n + k] = c.mean[t](k);
      if (cov)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j) cov[(t * n + k) * n + j] = c.cov[t](k, j);
    }
  });
}

/* ---- models ------------------------------------------------------------- */

int cddm_model_coupled_ddm(const cddm_graph* g, double beta, double sigma, cddm_model** out) {
  return guarded([&] {
    need(g != nullptr && out != nullptr, "null argument");
    *out = new cddm_model{cddm::coupled_ddm(g->g, beta, sigma)};
  });
}

int cddm_model_centralized_ddm(int n, double beta, cddm_model** out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = new cddm_model{cddm::centralized_ddm(n, beta)};
  });
}

int cddm_model_error_dynamics(const cddm_graph* g, cddm_model** out) {
  return guarded([&] {
    need(g != nullptr && out != nullptr, "null argument");
    *out = new cddm_model{cddm::error_dynamics(g->g)};
  });
}

int cddm_model_reduced_ddm(double mu, double beta, int n, cddm_model** out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = new cddm_model{cddm::reduced_ddm(mu, beta, n)};
  });
}

int cddm_model_coupled_ou(const cddm_graph* g, double beta, double theta, cddm_model** out) {
  return guarded([&] {
    need(g != nullptr && out != nullptr, "null argument");
    *out = new cddm_model{cddm::coupled_ou(g->g, beta, theta)};
  });
}

int cddm_model_reduced_ou(double mu_hat, double beta, double theta, int n, cddm_model** out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = new cddm_model{cddm::reduced_ou(mu_hat, beta, theta, n)};
  });
}

int cddm_model_coupled_race(const cddm_graph* g, const double* beta, int m, double sigma,
                            cddm_model** out) {
  return guarded([&] {
    need(g != nullptr && beta != nullptr && out != nullptr, "null argument");
    need(m >= 2, "race needs at least two alternatives");
    *out = new cddm_model{
        cddm::coupled_race(g->g, std::vector<double>(beta, beta + m), sigma)};
  });
}

int cddm_model_from_json(const char* text, cddm_model** out) {
  return guarded([&] {
    need(text != nullptr && out != nullptr, "null argument");
    *out = new cddm_model{cddm::ModelSpec::from_json(text)};
  });
}

int cddm_model_to_json(const cddm_model* m, char** out) {
  return guarded([&] {
    need(m != nullptr && out != nullptr, "null argument");
    *out = dup_string(m->m.to_json());
  });
}

int cddm_model_dim(const cddm_model* m, int* out) {
  return guarded([&] {
    need(m != nullptr && out != nullptr, "null argument");
    *out = m->m.dim();
  });
}

int cddm_model_nodes(const cddm_model* m, int* out) {
  return guarded([&] {
    need(m != nullptr && out != nullptr, "null argument");
    *out = m->m.nodes;
  });
}

int cddm_model_alternatives(const cddm_model* m, int* out) {
  return guarded([&] {
    need(m != nullptr && out != nullptr, "null argument");
    *out = m->m.alternatives;
  });
}

void cddm_model_free(cddm_model* m) { delete m; }

/* ---- simulation ---------------------------------------------------------- */

int cddm_run_ensemble(const cddm_model* m, const cddm_rule* rule, const cddm_sim_params* p,
                      cddm_outcomes** out) {
  return guarded([&] {
    need(m != nullptr && out != nullptr, "null argument");
    *out = new cddm_outcomes{cddm::run_ensemble(m->m, to_rule(rule), to_params(p))};
  });
}

int cddm_outcomes_count(const cddm_outcomes* o, int64_t* out) {
  return guarded([&] {
    need(o != nullptr && out != nullptr, "null argument");
    *out = static_cast<int64_t>(o->v.size());
  });
}

int cddm_outcomes_get(const cddm_outcomes* o, int64_t i, cddm_outcome* out) {
  return guarded([&] {
    need(o != nullptr && out != nullptr, "null argument");
    need(i >= 0 && i < static_cast<int64_t>(o->v.size()), "outcome index out of range");
    const cddm::TrialOutcome& t = o->v[static_cast<std::size_t>(i)];
    out->trial = t.trial;
    out->node = t.node;
    out->decision = t.decision;
    out->time = t.time;
    out->steps = t.steps;
  });
}

int cddm_outcomes_csv(const cddm_outcomes* o, char** out) {
  return guarded([&] {
    need(o != nullptr && out != nullptr, "null argument");
    *out = dup_string(cddm::outcomes_to_csv(o->v));
  });
}

void cddm_outcomes_free(cddm_outcomes* o) { delete o; }

int cddm_simulate_path(const cddm_model* m, double dt, int steps, uint64_t seed, int64_t trial,
                       double* out) {
  return guarded([&] {
    need(m != nullptr && out != nullptr, "null argument");
    const Eigen::MatrixXd path = cddm::simulate_path(m->m, dt, steps, seed, trial);
    for (int r = 0; r < path.rows(); ++r)
      for (int c = 0; c < path.cols(); ++c) out[r * path.cols() + c] = path(r, c);
  });
}

/* ---- analysis ------------------------------------------------------------ */

int cddm_ddm_performance(double beta, double sigma, double eta, double* et, double* er) {
  return guarded([&] {
    need(et != nullptr && er != nullptr, "null output pointer");
    const cddm::DdmPerformance p = cddm::ddm_performance(beta, sigma, eta);
    *et = p.mean_time;
    *er = p.error_rate;
  });
}

int cddm_exp_square_integral(double z, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::exp_square_integral(z);
  });
}

int cddm_exp_square_erf_integral(double z, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::exp_square_erf_integral(z);
  });
}

int cddm_ou_mean_fpt(double mu, double eta, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::ou_mean_fpt(mu, eta);
  });
}

int cddm_ou_fpt_density(double mu, double eta, double t, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::ou_fpt_density(mu, eta, t);
  });
}

int cddm_ou_mean_fpt_bounds(double mu, double eta, double* low, double* high) {
  return guarded([&] {
    need(low != nullptr && high != nullptr, "null output pointer");
    const cddm::Bracket b = cddm::ou_mean_fpt_bounds(mu, eta);
    *low = b.low;
    *high = b.high;
  });
}

int cddm_ou_containment_lower(double K, double mu, double t, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::ou_containment_lower(K, mu, t);
  });
}

int cddm_ou_uniform_bound(double K, double mu, double t, int two_sided, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::ou_uniform_bound(K, mu, t, two_sided != 0);
  });
}

int cddm_reduced_performance_bounds(double eta, double K, double mu, double beta, int n,
                                    cddm_bounds* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    const cddm::PerformanceBounds b = cddm::reduced_performance_bounds(eta, K, mu, beta, n);
    out->et_low = b.et_low;
    out->et_high = b.et_high;
    out->er_low = b.er_low;
    out->er_high = b.er_high;
    out->confidence = b.confidence;
    out->K = b.K;
  });
}

/* ---- pde ------------------------------------------------------------------ */

int cddm_solve_reduced_pde(double mu, double beta, int n, double eta, int which, double eta_bar,
                           int ny, int ne, cddm_pde** out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    need(which == 0 || which == 1, "which must be 0 (mean_time) or 1 (error_prob)");
    const cddm::PdeField f = which == 0 ? cddm::PdeField::mean_time : cddm::PdeField::error_prob;
    if (ny == 0) ny = 201;
    if (ne == 0) ne = 201;
    if (eta_bar <= 0.0) eta_bar = 0.0;
    *out = new cddm_pde{cddm::solve_reduced_pde(mu, beta, n, eta, f, eta_bar, ny, ne)};
  });
}

int cddm_pde_info_get(const cddm_pde* p, cddm_pde_info* out) {
  return guarded([&] {
    need(p != nullptr && out != nullptr, "null argument");
    out->which = p->s.which == cddm::PdeField::mean_time ? 0 : 1;
    out->ny = p->s.grid.ny;
    out->ne = p->s.grid.ne;
    out->y_lo = p->s.grid.y_lo;
    out->y_hi = p->s.grid.y_hi;
    out->e_lo = p->s.grid.e_lo;
    out->e_hi = p->s.grid.e_hi;
    out->residual = p->s.residual;
    out->sweeps = p->s.sweeps;
  });
}

const char* cddm_pde_warning(const cddm_pde* p) { return p ? p->s.warning.c_str() : ""; }

int cddm_pde_at(const cddm_pde* p, double y, double eps, double* out) {
  return guarded([&] {
    need(p != nullptr && out != nullptr, "null argument");
    *out = p->s.at(y, eps);
  });
}

int cddm_pde_values(const cddm_pde* p, double* out) {
  return guarded([&] {
    need(p != nullptr && out != nullptr, "null argument");
    const int ny = p->s.grid.ny, ne = p->s.grid.ne;
    for (int i = 0; i < ny; ++i)
      for (int j = 0; j < ne; ++j) out[i * ne + j] = p->s.values(i, j);
  });
}

int cddm_pde_csv(const cddm_pde* p, char** out) {
  return guarded([&] {
    need(p != nullptr && out != nullptr, "null argument");
    *out = dup_string(p->s.to_csv());
  });
}

int cddm_pde_write_binary(const cddm_pde* p, const char* path) {
  return guarded([&] {
    need(p != nullptr && path != nullptr, "null argument");
    p->s.write_binary(path);
  });
}

int cddm_pde_read_binary(const char* path, cddm_pde** out) {
  return guarded([&] {
    need(path != nullptr && out != nullptr, "null argument");
    *out = new cddm_pde{cddm::PdeSolution::read_binary(path)};
  });
}

void cddm_pde_free(cddm_pde* p) { delete p; }

int cddm_solve_ddm_profile(double beta, double sigma, double eta, int which, int npoints,
                           double* x, double* v) {
  return guarded([&] {
    need(x != nullptr && v != nullptr, "null output pointer");
    need(which == 0 || which == 1, "which must be 0 (mean_time) or 1 (error_prob)");
    const cddm::PdeField f = which == 0 ? cddm::PdeField::mean_time : cddm::PdeField::error_prob;
    const cddm::ProfileSolution sol = cddm::solve_ddm_profile(beta, sigma, eta, f, npoints);
    std::memcpy(x, sol.x.data(), sol.x.size() * sizeof(double));
    std::memcpy(v, sol.values.data(), sol.values.size() * sizeof(double));
  });
}

/* ---- thresholds ------------------------------------------------------------ */

int cddm_kbar(double beta, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::kbar(beta);
  });
}

int cddm_corrected_threshold(double eta, double beta, double mu, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::corrected_threshold(eta, beta, mu);
  });
}

int cddm_corrected_performance(double eta, double beta, double mu, int n, double* et,
                               double* er) {
  return guarded([&] {
    need(et != nullptr && er != nullptr, "null output pointer");
    const cddm::DdmPerformance p = cddm::corrected_performance(eta, beta, mu, n);
    *et = p.mean_time;
    *er = p.error_rate;
  });
}

int cddm_wald_threshold(double alpha, double beta, int n, double mu, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::wald_threshold(alpha, beta, n, mu);
  });
}

int cddm_wald_expected_time(double alpha, double beta, int n, double mu, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::wald_expected_time(alpha, beta, n, mu);
  });
}

int cddm_bayes_threshold(double cost, double beta, int n, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::bayes_threshold(cost, beta, n);
  });
}

int cddm_reward_rate_threshold(double D, double Dp, double T_motor, double beta, int n,
                               double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::reward_rate_threshold(D, Dp, T_motor, beta, n);
  });
}

int cddm_race_threshold(int m, double R, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::race_threshold(m, R);
  });
}

int cddm_apply_policy(const cddm_policy* policy, const double* mu, int n_mu, double beta, int n,
                      double* out_eta) {
  return guarded([&] {
    need(policy != nullptr && mu != nullptr && out_eta != nullptr, "null argument");
    need(n_mu > 0, "need at least one certainty index");
    cddm::ThresholdPolicy p;
    switch (policy->kind) {
      case 0: p = cddm::ThresholdPolicy::fixed(policy->eta); break;
      case 1: p = cddm::ThresholdPolicy::wald(policy->alpha); break;
      case 2: p = cddm::ThresholdPolicy::bayes(policy->cost); break;
      case 3: p = cddm::ThresholdPolicy::reward_rate(policy->D, policy->Dp, policy->T_motor); break;
      default: cddm::fail(Status::invalid_argument, "policy kind must be 0..3");
    }
    const std::vector<double> eta =
        cddm::apply_policy(p, std::vector<double>(mu, mu + n_mu), beta, n);
    std::memcpy(out_eta, eta.data(), eta.size() * sizeof(double));
  });
}

/* ---- experiments ------------------------------------------------------------ */

int cddm_estimate_performance(const cddm_model* m, const cddm_rule* rule, int node,
                              int64_t trials, double dt, double max_t, uint64_t seed,
                              int crossing, int threads, cddm_estimate** out) {
  return guarded([&] {
    need(m != nullptr && out != nullptr, "null argument");
    *out = new cddm_estimate{cddm::estimate_performance(
        m->m, to_rule(rule), node, trials, dt, max_t, seed, to_crossing(crossing), threads)};
  });
}

int cddm_estimate_info(const cddm_estimate* e, cddm_perf* out) {
  return guarded([&] {
    need(e != nullptr && out != nullptr, "null argument");
    out->node = e->e.node;
    out->trials = e->e.trials;
    out->decided = e->e.decided;
    out->er_hat = e->e.er_hat;
    out->er_se = e->e.er_se;
    out->et_hat = e->e.et_hat;
    out->et_se = e->e.et_se;
    out->timeout_fraction = e->e.timeout_fraction;
    out->bins = static_cast<int32_t>(e->e.fpt_histogram.counts.size());
  });
}

int cddm_estimate_histogram(const cddm_estimate* e, double* edges, int64_t* counts) {
  return guarded([&] {
    need(e != nullptr && edges != nullptr && counts != nullptr, "null argument");
    const cddm::FptHistogram& h = e->e.fpt_histogram;
    std::memcpy(edges, h.edges.data(), h.edges.size() * sizeof(double));
    std::memcpy(counts, h.counts.data(), h.counts.size() * sizeof(int64_t));
  });
}

int cddm_estimate_histogram_csv(const cddm_estimate* e, char** out) {
  return guarded([&] {
    need(e != nullptr && out != nullptr, "null argument");
    *out = dup_string(cddm::histogram_to_csv(e->e.fpt_histogram));
  });
}

void cddm_estimate_free(cddm_estimate* e) { delete e; }

int cddm_log_likelihood_no_error(double er, double* out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = cddm::log_likelihood_no_error(er);
  });
}

int cddm_correction_experiment(double beta, double eta, int graph_count, int64_t trials_per_node,
                               uint64_t seed, double dt, int crossing, int threads,
                               cddm_regression** out) {
  return guarded([&] {
    need(out != nullptr, "null output pointer");
    *out = new cddm_regression{cddm::correction_experiment(
        beta, eta, graph_count, trials_per_node, seed, dt, to_crossing(crossing), threads)};
  });
}

int cddm_regression_info(const cddm_regression* r, double* slope, double* residual_rms,
                         int64_t* n_points) {
  return guarded([&] {
    need(r != nullptr, "null regression");
    if (slope) *slope = r->r.slope;
    if (residual_rms) *residual_rms = r->r.residual_rms;
    if (n_points) *n_points = static_cast<int64_t>(r->r.points.size());
  });
}

int cddm_regression_points(const cddm_regression* r, double* x, double* y) {
  return guarded([&] {
    need(r != nullptr && x != nullptr && y != nullptr, "null argument");
    for (std::size_t i = 0; i < r->r.points.size(); ++i) {
      x[i] = r->r.points[i].first;
      y[i] = r->r.points[i].second;
    }
  });
}

int cddm_regression_csv(const cddm_regression* r, char** out) {
  return guarded([&] {
    need(r != nullptr && out != nullptr, "null argument");
    *out = dup_string(cddm::regression_to_csv(r->r));
  });
}

void cddm_regression_free(cddm_regression* r) { delete r; }

int cddm_compare_models(const cddm_graph* g, int node, double beta, const double* etas,
                        int n_etas, int64_t trials, uint64_t seed, double dt, double max_t,
                        int crossing, int threads, cddm_table** out) {
  return guarded([&] {
    need(g != nullptr && etas != nullptr && out != nullptr, "null argument");
    need(n_etas > 0, "need at least one threshold");
    *out = new cddm_table{cddm::compare_models(g->g, node, beta,
                                               std::vector<double>(etas, etas + n_etas), trials,
                                               seed, dt, max_t, to_crossing(crossing), threads)};
  });
}

int cddm_table_rows(const cddm_table* t, int64_t* out) {
  return guarded([&] {
    need(t != nullptr && out != nullptr, "null argument");
    *out = static_cast<int64_t>(t->rows.size());
  });
}

int cddm_table_row(const cddm_table* t, int64_t i, double* eta, char* model, double* er,
                   double* et) {
  return guarded([&] {
    need(t != nullptr && eta != nullptr && model != nullptr && er != nullptr && et != nullptr,
         "null argument");
    need(i >= 0 && i < static_cast<int64_t>(t->rows.size()), "row index out of range");
    const cddm::CompareRow& r = t->rows[static_cast<std::size_t>(i)];
    need(r.model.size() < 16, "model name overflows the row buffer");
    *eta = r.eta;
    std::memcpy(model, r.model.c_str(), r.model.size() + 1);
    *er = r.er;
    *et = r.et;
  });
}

int cddm_table_csv(const cddm_table* t, char** out) {
  return guarded([&] {
    need(t != nullptr && out != nullptr, "null argument");
    *out = dup_string(cddm::compare_to_csv(t->rows));
  });
}

void cddm_table_free(cddm_table* t) { delete t; }

} /* extern "C" */
