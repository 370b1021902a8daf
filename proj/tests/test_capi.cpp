#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "cddm.h"
#include "doctest.h"

namespace {

std::string temp_path(const char* tag) {
  std::string tmpl = std::string("/tmp/cddm_capi_") + tag + "_XXXXXX";
  const int fd = mkstemp(tmpl.data());
  REQUIRE(fd >= 0);
  close(fd);
  return tmpl;
}

// grabs and frees a library-owned string in one move
std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  cddm_string_free(s);
  return out;
}

struct GraphHandle {
  cddm_graph* g = nullptr;
  ~GraphHandle() { cddm_graph_free(g); }
};

struct ModelHandle {
  cddm_model* m = nullptr;
  ~ModelHandle() { cddm_model_free(m); }
};

}  // namespace

TEST_CASE("library identity and error reporting") {
  CHECK(cddm_version() != nullptr);
  CHECK(std::string(cddm_version()).find('.') != std::string::npos);

  CHECK(std::string(cddm_status_name(CDDM_STATUS_OK)) == "ok");
  CHECK(std::string(cddm_status_name(CDDM_STATUS_PARSE_ERROR)) == "parse_error");
  CHECK(std::string(cddm_status_name(CDDM_STATUS_TOO_MANY_TIMEOUTS)) == "too_many_timeouts");

  char buf[64];
  REQUIRE(cddm_format_double(0.5, buf, 64) == CDDM_STATUS_OK);
  CHECK(std::string(buf) == "0.5");
  REQUIRE(cddm_format_double(3.0, buf, 64) == CDDM_STATUS_OK);
  CHECK(std::string(buf) == "3");
  CHECK(cddm_format_double(0.1234567890123, buf, 2) == CDDM_STATUS_INVALID_ARGUMENT);
  CHECK(cddm_format_double(1.0, nullptr, 64) == CDDM_STATUS_INVALID_ARGUMENT);

  // a failure leaves a nonempty thread-local message
  cddm_graph* g = nullptr;
  CHECK(cddm_graph_from_edge_list("junk", &g) == CDDM_STATUS_PARSE_ERROR);
  CHECK(std::strlen(cddm_last_error()) > 0);
}

TEST_CASE("graph lifecycle, spectrum and certainty") {
  GraphHandle h;
  REQUIRE(cddm_graph_paper9(&h.g) == CDDM_STATUS_OK);
  int n = 0;
  REQUIRE(cddm_graph_n(h.g, &n) == CDDM_STATUS_OK);
  REQUIRE(n == 9);

  std::vector<double> lambda(9), U(81);
  REQUIRE(cddm_graph_spectrum(h.g, lambda.data(), U.data()) == CDDM_STATUS_OK);
  CHECK(lambda[0] == 0.0);
  for (int i = 1; i < 9; ++i) CHECK(lambda[i] >= lambda[i - 1]);
  CHECK(lambda[8] > 0.0);
  for (int k = 0; k < 9; ++k) CHECK(U[k * 9 + 0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  std::vector<double> mu(9);
  REQUIRE(cddm_graph_certainty(h.g, mu.data()) == CDDM_STATUS_OK);
  CHECK(mu[0] == doctest::Approx(8.1).epsilon(1e-9));
  CHECK(mu[1] == doctest::Approx(81.0 / 19.0).epsilon(1e-9));
  CHECK(mu[5] == doctest::Approx(162.0 / 101.0).epsilon(1e-9));

  std::vector<double> mu0(9), muth(9);
  REQUIRE(cddm_graph_ou_certainty(h.g, 0.0, mu0.data()) == CDDM_STATUS_OK);
  for (int k = 0; k < 9; ++k) CHECK(mu0[k] == doctest::Approx(mu[k]).epsilon(1e-9));
  REQUIRE(cddm_graph_ou_certainty(h.g, 0.1, muth.data()) == CDDM_STATUS_OK);
  CHECK(muth[5] == doctest::Approx(1.8856921123064116).epsilon(1e-9));
  for (int k = 0; k < 9; ++k) CHECK(muth[k] > mu[k]);

  double corr = 0.0;
  REQUIRE(cddm_error_correlation(h.g, 5, &corr) == CDDM_STATUS_OK);
  CHECK(corr > 0.0);
  CHECK(corr <= 1.0 + 1e-12);
  CHECK(cddm_error_correlation(h.g, 9, &corr) == CDDM_STATUS_INVALID_ARGUMENT);

  // text round trip and file round trip
  char* text = nullptr;
  REQUIRE(cddm_graph_to_edge_list(h.g, &text) == CDDM_STATUS_OK);
  const std::string listing = take(text);
  CHECK(listing.rfind("n 9\n", 0) == 0);
  GraphHandle back;
  REQUIRE(cddm_graph_from_edge_list(listing.c_str(), &back.g) == CDDM_STATUS_OK);
  char* text2 = nullptr;
  REQUIRE(cddm_graph_to_edge_list(back.g, &text2) == CDDM_STATUS_OK);
  CHECK(take(text2) == listing);

  const std::string path = temp_path("graph");
  REQUIRE(cddm_graph_save(h.g, path.c_str()) == CDDM_STATUS_OK);
  GraphHandle loaded;
  REQUIRE(cddm_graph_load(path.c_str(), &loaded.g) == CDDM_STATUS_OK);
  char* text3 = nullptr;
  REQUIRE(cddm_graph_to_edge_list(loaded.g, &text3) == CDDM_STATUS_OK);
  CHECK(take(text3) == listing);
  std::remove(path.c_str());

  cddm_graph* bad = nullptr;
  CHECK(cddm_graph_from_edge_list("n 3\n0 1\n", &bad) == CDDM_STATUS_DISCONNECTED_GRAPH);
  CHECK(cddm_graph_load("/nonexistent/void.edges", &bad) == CDDM_STATUS_IO_ERROR);
  CHECK(cddm_graph_erdos_renyi(3, 1e-12, 1, &bad) == CDDM_STATUS_GENERATION_FAILURE);
  CHECK(cddm_graph_paper9(nullptr) == CDDM_STATUS_INVALID_ARGUMENT);

  GraphHandle er;
  REQUIRE(cddm_graph_erdos_renyi(6, 0.6, 42, &er.g) == CDDM_STATUS_OK);
  REQUIRE(cddm_graph_n(er.g, &n) == CDDM_STATUS_OK);
  CHECK(n == 6);
}

TEST_CASE("moment curves through the flat interface") {
  GraphHandle h;
  REQUIRE(cddm_graph_paper9(&h.g) == CDDM_STATUS_OK);
  const double times[2] = {0.5, 1.0};
  const int n = 9;
  std::vector<double> mean(2 * n), cov(2 * n * n);

  REQUIRE(cddm_moments(h.g, 0, 0.1, 1.0, times, 2, mean.data(), cov.data()) == CDDM_STATUS_OK);
  for (int t = 0; t < 2; ++t)
    for (int k = 0; k < n; ++k)
      CHECK(mean[t * n + k] == doctest::Approx(0.1 * times[t]).epsilon(1e-12));
  for (int t = 0; t < 2; ++t)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(cov[t * n * n + i * n + j] ==
              doctest::Approx(cov[t * n * n + j * n + i]).epsilon(1e-12));
  // variances grow with time
  for (int k = 0; k < n; ++k) CHECK(cov[n * n + k * n + k] > cov[k * n + k]);

  std::vector<double> emean(2 * n);
  REQUIRE(cddm_moments(h.g, 1, 0.1, 0.0, times, 2, emean.data(), nullptr) == CDDM_STATUS_OK);
  for (double v : emean) CHECK(v == 0.0);

  const double theta = 0.3;
  std::vector<double> omean(2 * n);
  REQUIRE(cddm_moments(h.g, 2, 0.1, theta, times, 2, omean.data(), nullptr) == CDDM_STATUS_OK);
  for (int t = 0; t < 2; ++t) {
    const double expect = 0.1 * (1.0 - std::exp(-theta * times[t])) / theta;
    for (int k = 0; k < n; ++k)
      CHECK(omean[t * n + k] == doctest::Approx(expect).epsilon(1e-9));
  }

  CHECK(cddm_moments(h.g, 7, 0.1, 1.0, times, 2, mean.data(), nullptr) ==
        CDDM_STATUS_INVALID_ARGUMENT);
  CHECK(cddm_moments(h.g, 0, 0.1, 1.0, nullptr, 2, mean.data(), nullptr) ==
        CDDM_STATUS_INVALID_ARGUMENT);
}

TEST_CASE("model handles expose their shape and serialize") {
  GraphHandle h;
  REQUIRE(cddm_graph_paper9(&h.g) == CDDM_STATUS_OK);

  ModelHandle coupled;
  REQUIRE(cddm_model_coupled_ddm(h.g, 0.1, 1.0, &coupled.m) == CDDM_STATUS_OK);
  int dim = 0, nodes = 0, alts = 0;
  REQUIRE(cddm_model_dim(coupled.m, &dim) == CDDM_STATUS_OK);
  REQUIRE(cddm_model_nodes(coupled.m, &nodes) == CDDM_STATUS_OK);
  REQUIRE(cddm_model_alternatives(coupled.m, &alts) == CDDM_STATUS_OK);
  CHECK(dim == 9);
  CHECK(nodes == 9);
  CHECK(alts == 1);

  const double betas[3] = {0.12, 0.1, 0.08};
  ModelHandle race;
  REQUIRE(cddm_model_coupled_race(h.g, betas, 3, 1.0, &race.m) == CDDM_STATUS_OK);
  REQUIRE(cddm_model_dim(race.m, &dim) == CDDM_STATUS_OK);
  REQUIRE(cddm_model_alternatives(race.m, &alts) == CDDM_STATUS_OK);
  CHECK(dim == 27);
  CHECK(alts == 3);

  ModelHandle reduced;
  REQUIRE(cddm_model_reduced_ddm(1.6, 0.1, 9, &reduced.m) == CDDM_STATUS_OK);
  REQUIRE(cddm_model_dim(reduced.m, &dim) == CDDM_STATUS_OK);
  CHECK(dim == 2);

  ModelHandle cent;
  REQUIRE(cddm_model_centralized_ddm(9, 0.1, &cent.m) == CDDM_STATUS_OK);
  ModelHandle err;
  REQUIRE(cddm_model_error_dynamics(h.g, &err.m) == CDDM_STATUS_OK);
  ModelHandle cou;
  REQUIRE(cddm_model_coupled_ou(h.g, 0.1, 0.1, &cou.m) == CDDM_STATUS_OK);
  ModelHandle rou;
  REQUIRE(cddm_model_reduced_ou(1.8857, 0.1, 0.1, 9, &rou.m) == CDDM_STATUS_OK);

  char* js = nullptr;
  REQUIRE(cddm_model_to_json(race.m, &js) == CDDM_STATUS_OK);
  const std::string json = take(js);
  ModelHandle parsed;
  REQUIRE(cddm_model_from_json(json.c_str(), &parsed.m) == CDDM_STATUS_OK);
  char* js2 = nullptr;
  REQUIRE(cddm_model_to_json(parsed.m, &js2) == CDDM_STATUS_OK);
  CHECK(take(js2) == json);

  cddm_model* bad = nullptr;
  CHECK(cddm_model_from_json("{ not json", &bad) == CDDM_STATUS_PARSE_ERROR);
  CHECK(cddm_model_coupled_ddm(nullptr, 0.1, 1.0, &bad) == CDDM_STATUS_INVALID_ARGUMENT);
  CHECK(cddm_model_coupled_race(h.g, betas, 1, 1.0, &bad) == CDDM_STATUS_INVALID_ARGUMENT);
}

TEST_CASE("ensemble simulation through the flat interface") {
  ModelHandle m;
  REQUIRE(cddm_model_centralized_ddm(1, 0.3, &m.m) == CDDM_STATUS_OK);

  const int node0[1] = {0};
  const double eta[1] = {1.0};
  cddm_rule rule{1, node0, 1, eta, 1};
  cddm_sim_params params{5e-3, 500.0, 200, 99, 1, 1};

  cddm_outcomes* out = nullptr;
  REQUIRE(cddm_run_ensemble(m.m, &rule, &params, &out) == CDDM_STATUS_OK);
  int64_t count = 0;
  REQUIRE(cddm_outcomes_count(out, &count) == CDDM_STATUS_OK);
  CHECK(count == 200);
  cddm_outcome o;
  REQUIRE(cddm_outcomes_get(out, 0, &o) == CDDM_STATUS_OK);
  CHECK(o.trial == 0);
  CHECK(o.node == 0);
  CHECK((o.decision == 0 || o.decision == 1));
  CHECK(o.time > 0.0);
  CHECK(o.steps > 0);
  CHECK(cddm_outcomes_get(out, 200, &o) == CDDM_STATUS_INVALID_ARGUMENT);

  char* csv = nullptr;
  REQUIRE(cddm_outcomes_csv(out, &csv) == CDDM_STATUS_OK);
  const std::string table = take(csv);
  CHECK(table.rfind("trial,node,decision,decision_time,steps\n", 0) == 0);
  cddm_outcomes_free(out);

  std::vector<double> path(11);
  REQUIRE(cddm_simulate_path(m.m, 0.01, 10, 4, 0, path.data()) == CDDM_STATUS_OK);
  CHECK(path[0] == 0.0);
  bool moved = false;
  for (int i = 1; i <= 10; ++i) moved = moved || path[i] != 0.0;
  CHECK(moved);

  // race rules cannot use the bridge crossing mode
  GraphHandle g;
  REQUIRE(cddm_graph_paper9(&g.g) == CDDM_STATUS_OK);
  const double betas[2] = {0.12, 0.1};
  ModelHandle race;
  REQUIRE(cddm_model_coupled_race(g.g, betas, 2, 1.0, &race.m) == CDDM_STATUS_OK);
  cddm_rule race_rule{3, node0, 1, eta, 1};
  cddm_outcomes* ro = nullptr;
  CHECK(cddm_run_ensemble(race.m, &race_rule, &params, &ro) == CDDM_STATUS_INVALID_REGIME);
  cddm_sim_params grid = params;
  grid.crossing = 0;
  grid.trials = 50;
  REQUIRE(cddm_run_ensemble(race.m, &race_rule, &grid, &ro) == CDDM_STATUS_OK);
  REQUIRE(cddm_outcomes_count(ro, &count) == CDDM_STATUS_OK);
  CHECK(count == 50);
  cddm_outcomes_free(ro);

  CHECK(cddm_run_ensemble(nullptr, &rule, &params, &out) == CDDM_STATUS_INVALID_ARGUMENT);
  CHECK(cddm_run_ensemble(m.m, nullptr, &params, &out) == CDDM_STATUS_INVALID_ARGUMENT);
}

TEST_CASE("scalar analysis and threshold functions") {
  double et = 0.0, er = 0.0, v = 0.0;
  REQUIRE(cddm_ddm_performance(0.1, 1.0, 3.0, &et, &er) == CDDM_STATUS_OK);
  CHECK(et == doctest::Approx(8.7393783735).epsilon(1e-9));
  CHECK(er == doctest::Approx(0.3543436938).epsilon(1e-9));

  REQUIRE(cddm_exp_square_integral(1.0, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(1.46265174591).epsilon(1e-10));
  REQUIRE(cddm_exp_square_erf_integral(1.0, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(0.722622806694).epsilon(1e-10));
  CHECK(cddm_exp_square_integral(6.5, &v) == CDDM_STATUS_DOMAIN_OVERFLOW);

  REQUIRE(cddm_ou_mean_fpt(2.0, 1.0, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(4.03772833296).epsilon(1e-10));
  double lo = 0.0, hi = 0.0;
  REQUIRE(cddm_ou_mean_fpt_bounds(2.0, 1.0, &lo, &hi) == CDDM_STATUS_OK);
  CHECK(lo <= v);
  CHECK(v <= hi);
  REQUIRE(cddm_ou_fpt_density(2.0, 1.0, 0.0, &v) == CDDM_STATUS_OK);
  CHECK(v > 0.0);
  REQUIRE(cddm_ou_containment_lower(2.0, 2.0, 10.0, &v) == CDDM_STATUS_OK);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  double one = 0.0, two = 0.0;
  REQUIRE(cddm_ou_uniform_bound(2.0, 2.0, 10.0, 0, &one) == CDDM_STATUS_OK);
  REQUIRE(cddm_ou_uniform_bound(2.0, 2.0, 10.0, 1, &two) == CDDM_STATUS_OK);
  CHECK(two == doctest::Approx(2.0 * one - 1.0).epsilon(1e-13));

  cddm_bounds b;
  REQUIRE(cddm_reduced_performance_bounds(3.0, 2.0, 4.0, 0.1, 9, &b) == CDDM_STATUS_OK);
  CHECK(b.et_low == doctest::Approx(20.0 * std::tanh(1.8)).epsilon(1e-12));
  CHECK(b.et_high == doctest::Approx(40.0 * std::tanh(3.6)).epsilon(1e-12));
  CHECK(b.er_low < b.er_high);
  CHECK(b.K == 2.0);
  CHECK(cddm_reduced_performance_bounds(0.5, 2.0, 4.0, 0.1, 9, &b) ==
        CDDM_STATUS_INVALID_REGIME);

  REQUIRE(cddm_kbar(0.1, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(1.3880963951548029).epsilon(1e-12));
  REQUIRE(cddm_corrected_threshold(3.0, 0.1, 4.0, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(3.0 - 1.3880963951548029 / 2.0).epsilon(1e-12));
  REQUIRE(cddm_corrected_performance(3.0, 0.1, 4.0, 9, &et, &er) == CDDM_STATUS_OK);
  CHECK(et > 0.0);
  CHECK(er > 0.0);
  REQUIRE(cddm_wald_threshold(0.01, 0.1, 9, 1.6, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(3.65023).epsilon(1e-5));
  REQUIRE(cddm_wald_expected_time(0.01, 0.1, 9, 1.6, &v) == CDDM_STATUS_OK);
  CHECK(v > 0.0);
  REQUIRE(cddm_bayes_threshold(10.0, 0.1, 9, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(0.245944).epsilon(1e-5));
  REQUIRE(cddm_reward_rate_threshold(10.0, 1.0, 0.3, 0.1, 9, &v) == CDDM_STATUS_OK);
  CHECK(v > 0.0);
  REQUIRE(cddm_race_threshold(2, 0.05, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(2.302585092994046).epsilon(1e-14));
  CHECK(cddm_race_threshold(1, 0.05, &v) == CDDM_STATUS_INVALID_ARGUMENT);
  CHECK(cddm_log_likelihood_no_error(0.0, &v) == CDDM_STATUS_DEGENERATE_ER);
  REQUIRE(cddm_log_likelihood_no_error(0.1, &v) == CDDM_STATUS_OK);
  CHECK(v == doctest::Approx(std::log(9.0)).epsilon(1e-14));

  const double mu3[3] = {8.1, 81.0 / 19.0, 162.0 / 101.0};
  double etas[3] = {0.0, 0.0, 0.0};
  cddm_policy pol{2, 0.0, 0.0, 10.0, 0.0, 0.0, 0.0};
  REQUIRE(cddm_apply_policy(&pol, mu3, 3, 0.1, 9, etas) == CDDM_STATUS_OK);
  CHECK(etas[0] < etas[1]);
  CHECK(etas[1] < etas[2]);
  CHECK(cddm_apply_policy(nullptr, mu3, 3, 0.1, 9, etas) == CDDM_STATUS_INVALID_ARGUMENT);
}

TEST_CASE("elliptic solver through the flat interface") {
  cddm_pde* p = nullptr;
  REQUIRE(cddm_solve_reduced_pde(2.0, 0.1, 9, 1.5, 0, 0.0, 61, 61, &p) == CDDM_STATUS_OK);
  cddm_pde_info info;
  REQUIRE(cddm_pde_info_get(p, &info) == CDDM_STATUS_OK);
  CHECK(info.which == 0);
  CHECK(info.ny == 61);
  CHECK(info.ne == 61);
  CHECK(info.y_lo == -1.5);
  CHECK(info.y_hi == 1.5);
  CHECK(info.residual <= 1e-9);
  CHECK(info.sweeps > 0);
  CHECK(std::string(cddm_pde_warning(p)) == "");

  double center = 0.0;
  REQUIRE(cddm_pde_at(p, 0.0, 0.0, &center) == CDDM_STATUS_OK);
  CHECK(center > 0.0);

  std::vector<double> values(61 * 61);
  REQUIRE(cddm_pde_values(p, values.data()) == CDDM_STATUS_OK);
  CHECK(values[30 * 61 + 30] == doctest::Approx(center).epsilon(1e-12));
  for (int j = 0; j < 61; ++j) CHECK(values[j] == 0.0);  // y = -eta edge

  char* csv = nullptr;
  REQUIRE(cddm_pde_csv(p, &csv) == CDDM_STATUS_OK);
  CHECK(take(csv).rfind("y,eps,value\n", 0) == 0);

  const std::string path = temp_path("pde");
  REQUIRE(cddm_pde_write_binary(p, path.c_str()) == CDDM_STATUS_OK);
  cddm_pde* back = nullptr;
  REQUIRE(cddm_pde_read_binary(path.c_str(), &back) == CDDM_STATUS_OK);
  cddm_pde_info info2;
  REQUIRE(cddm_pde_info_get(back, &info2) == CDDM_STATUS_OK);
  CHECK(info2.ny == info.ny);
  CHECK(info2.e_lo == info.e_lo);
  double center2 = 0.0;
  REQUIRE(cddm_pde_at(back, 0.0, 0.0, &center2) == CDDM_STATUS_OK);
  CHECK(center2 == center);
  cddm_pde_free(back);
  std::remove(path.c_str());

  double q = 0.0;
  CHECK(cddm_pde_at(p, 99.0, 0.0, &q) == CDDM_STATUS_OUT_OF_DOMAIN);
  cddm_pde_free(p);

  const std::string bad = temp_path("badpde");
  std::ofstream(bad, std::ios::binary) << "WRONGMAGICxxxx";
  cddm_pde* nope = nullptr;
  CHECK(cddm_pde_read_binary(bad.c_str(), &nope) == CDDM_STATUS_PARSE_ERROR);
  std::remove(bad.c_str());
  CHECK(cddm_pde_read_binary("/nonexistent/grid.bin", &nope) == CDDM_STATUS_IO_ERROR);

  std::vector<double> x(101), vprof(101);
  REQUIRE(cddm_solve_ddm_profile(0.3, 1.0, 1.0, 0, 101, x.data(), vprof.data()) ==
          CDDM_STATUS_OK);
  CHECK(x[0] == -1.0);
  CHECK(x[100] == 1.0);
  CHECK(vprof[50] > 0.0);
  CHECK(cddm_solve_ddm_profile(0.3, -1.0, 1.0, 0, 101, x.data(), vprof.data()) ==
        CDDM_STATUS_INVALID_ARGUMENT);
}

TEST_CASE("experiment harness through the flat interface") {
  ModelHandle m;
  REQUIRE(cddm_model_centralized_ddm(1, 0.3, &m.m) == CDDM_STATUS_OK);
  const int node0[1] = {0};
  const double eta[1] = {1.0};
  cddm_rule rule{1, node0, 1, eta, 1};

  cddm_estimate* est = nullptr;
  REQUIRE(cddm_estimate_performance(m.m, &rule, 0, 500, 5e-3, 200.0, 11, 1, 1, &est) ==
          CDDM_STATUS_OK);
  cddm_perf perf;
  REQUIRE(cddm_estimate_info(est, &perf) == CDDM_STATUS_OK);
  CHECK(perf.node == 0);
  CHECK(perf.trials == 500);
  CHECK(perf.decided == 500);
  CHECK(perf.timeout_fraction == 0.0);
  CHECK(perf.et_hat > 0.0);
  CHECK(perf.er_hat > 0.0);
  CHECK(perf.bins == 22);  // round(sqrt(500))

  std::vector<double> edges(perf.bins + 1);
  std::vector<int64_t> counts(perf.bins);
  REQUIRE(cddm_estimate_histogram(est, edges.data(), counts.data()) == CDDM_STATUS_OK);
  CHECK(std::accumulate(counts.begin(), counts.end(), int64_t{0}) == perf.decided);
  for (int b = 1; b <= perf.bins; ++b) CHECK(edges[b] > edges[b - 1]);

  char* hcsv = nullptr;
  REQUIRE(cddm_estimate_histogram_csv(est, &hcsv) == CDDM_STATUS_OK);
  CHECK(take(hcsv).rfind("bin_lo,bin_hi,count\n", 0) == 0);
  cddm_estimate_free(est);

  cddm_estimate* none = nullptr;
  CHECK(cddm_estimate_performance(m.m, &rule, 0, 50, 5e-3, 200.0, 11, 1, 1, &none) ==
        CDDM_STATUS_INVALID_ARGUMENT);

  cddm_regression* reg = nullptr;
  REQUIRE(cddm_correction_experiment(0.1, 3.0, 2, 200, 7, 0.02, 1, 1, &reg) == CDDM_STATUS_OK);
  double slope = 0.0, rms = 0.0;
  int64_t npts = 0;
  REQUIRE(cddm_regression_info(reg, &slope, &rms, &npts) == CDDM_STATUS_OK);
  CHECK(npts >= 6);
  CHECK(slope > 0.0);
  std::vector<double> xs(npts), ys(npts);
  REQUIRE(cddm_regression_points(reg, xs.data(), ys.data()) == CDDM_STATUS_OK);
  for (double xx : xs) CHECK(xx > 0.0);
  char* rcsv = nullptr;
  REQUIRE(cddm_regression_csv(reg, &rcsv) == CDDM_STATUS_OK);
  CHECK(take(rcsv).rfind("inv_sqrt_mu,beta_delta_t\n", 0) == 0);
  cddm_regression_free(reg);

  GraphHandle k2;
  REQUIRE(cddm_graph_from_edge_list("n 2\n0 1\n", &k2.g) == CDDM_STATUS_OK);
  const double etas1[1] = {1.0};
  cddm_table* table = nullptr;
  REQUIRE(cddm_compare_models(k2.g, 0, 0.3, etas1, 1, 200, 5, 0.01, 500.0, 1, 1, &table) ==
          CDDM_STATUS_OK);
  int64_t rows = 0;
  REQUIRE(cddm_table_rows(table, &rows) == CDDM_STATUS_OK);
  CHECK(rows == 5);
  double reta = 0.0, rer = 0.0, ret = 0.0;
  char name[16];
  REQUIRE(cddm_table_row(table, 0, &reta, name, &rer, &ret) == CDDM_STATUS_OK);
  CHECK(std::string(name) == "coupled");
  CHECK(reta == 1.0);
  REQUIRE(cddm_table_row(table, 4, &reta, name, &rer, &ret) == CDDM_STATUS_OK);
  CHECK(std::string(name) == "pde");
  CHECK(cddm_table_row(table, 5, &reta, name, &rer, &ret) == CDDM_STATUS_INVALID_ARGUMENT);
  char* tcsv = nullptr;
  REQUIRE(cddm_table_csv(table, &tcsv) == CDDM_STATUS_OK);
  CHECK(take(tcsv).rfind("eta,model,er,et\n", 0) == 0);
  cddm_table_free(table);
}
