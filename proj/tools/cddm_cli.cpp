// Command-line front end. Everything here goes through the C API in cddm.h,
// so the binary doubles as an integration check of the shared library
// surface. Node indices are 1-based on this surface (0 marks "no node" in
// outcome rows); the library itself is 0-based.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cddm.h"
#include "json.hpp"

namespace {

using nlohmann::json;

// exit 1: the request itself is bad (arguments, files, parse, regime);
// exit 2: the computation failed (overflow, no root, divergence, timeouts)
int exit_code_for(int status) {
  switch (status) {
    case CDDM_STATUS_INVALID_ARGUMENT:
    case CDDM_STATUS_INVALID_EDGE:
    case CDDM_STATUS_DISCONNECTED_GRAPH:
    case CDDM_STATUS_OUT_OF_DOMAIN:
    case CDDM_STATUS_INVALID_REGIME:
    case CDDM_STATUS_DEGENERATE_ER:
    case CDDM_STATUS_IO_ERROR:
    case CDDM_STATUS_PARSE_ERROR:
      return 1;
    default:
      return 2;
  }
}

[[noreturn]] void die_validation(const std::string& msg) {
  std::cerr << "cddm: error: " << msg << "\n";
  std::exit(1);
}

// checks a C API call and names the failing operation on the way out
void check(int status, const std::string& op) {
  if (status == CDDM_STATUS_OK) return;
  std::cerr << "cddm: " << op << " failed (" << cddm_status_name(status)
            << "): " << cddm_last_error() << "\n";
  std::exit(exit_code_for(status));
}

std::string fmt(double v) {
  char buf[40];
  check(cddm_format_double(v, buf, sizeof buf), "format_double");
  return buf;
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  cddm_string_free(s);
  return out;
}

void write_output(const std::string& data, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f.good()) die_validation("cannot open output file " + out_path);
  f << data;
  if (!f.good()) die_validation("write failed for " + out_path);
}

// Options are registered through this book so a JSON config file can fill
// them in before the command line is parsed (flags win over config), and so
// the fully resolved set can be echoed back afterwards.
class OptBook {
 public:
  explicit OptBook(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* opt(const std::string& flag, T& var, const std::string& desc) {
    CLI::Option* o = app_->add_option(flag, var, desc);
    book(flag, var);
    return o;
  }

  template <typename T>
  CLI::Option* list(const std::string& flag, std::vector<T>& var, const std::string& desc) {
    CLI::Option* o = app_->add_option(flag, var, desc)->delimiter(',');
    book(flag, var);
    return o;
  }

  CLI::Option* toggle(const std::string& flag, bool& var, const std::string& desc) {
    CLI::Option* o = app_->add_flag(flag, var, desc);
    book(flag, var);
    return o;
  }

  // writes config values into the bound variables; runs before the parse,
  // so anything also given on the command line gets overwritten there
  void apply_config(const json& cfg) {
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      auto s = setters_.find(it.key());
      if (s == setters_.end())
        die_validation("unknown config key '" + it.key() +
                       "' (see schema/runconfig.schema.json)");
      try {
        s->second(it.value());
      } catch (const json::exception& e) {
        die_validation("config key '" + it.key() + "': " + e.what());
      }
    }
  }

  json resolved() const {
    json out = json::object();
    for (const auto& [key, get] : getters_) out[key] = get();
    return out;
  }

 private:
  template <typename T>
  void book(const std::string& flag, T& var) {
    const std::string key = flag.substr(flag.find_first_not_of('-'));
    setters_[key] = [&var](const json& v) { var = v.get<T>(); };
    getters_[key] = [&var]() { return json(var); };
  }

  CLI::App* app_;
  std::map<std::string, std::function<void(const json&)>> setters_;
  std::map<std::string, std::function<json()>> getters_;
};

// ---- shared option blocks ---------------------------------------------------

struct GraphOpts {
  std::string builtin;
  std::string file;
  std::vector<double> er;  // n,p
  std::uint64_t graph_seed = 0;

  void add(OptBook& b) {
    b.opt("--builtin", builtin, "bundled graph name (paper9)");
    b.opt("--graph-file", file, "edge-list file (n <count>, then 'u v [w]' lines)");
    b.list("--er", er, "Erdos-Renyi sample: n,p (connected; uses --graph-seed)");
    b.opt("--graph-seed", graph_seed, "seed for --er topology (default 0)");
  }

  bool given() const { return !builtin.empty() || !file.empty() || !er.empty(); }

  cddm_graph* make() const {
    const int sources = (!builtin.empty()) + (!file.empty()) + (!er.empty());
    if (sources != 1)
      die_validation("give exactly one graph source: --builtin, --graph-file or --er n,p");
    cddm_graph* g = nullptr;
    if (!builtin.empty()) {
      if (builtin != "paper9") die_validation("unknown builtin graph '" + builtin + "'");
      check(cddm_graph_paper9(&g), "graph_paper9");
    } else if (!file.empty()) {
      check(cddm_graph_load(file.c_str(), &g), "graph_load");
    } else {
      if (er.size() != 2) die_validation("--er takes exactly n,p");
      check(cddm_graph_erdos_renyi(static_cast<int>(er[0]), er[1], graph_seed, &g),
            "graph_erdos_renyi");
    }
    return g;
  }
};

struct SimOpts {
  double dt = 1e-3;
  double max_t = 500.0;
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  std::string crossing = "grid";
  int threads = 1;

  void add(OptBook& b) {
    b.opt("--dt", dt, "Euler step");
    b.opt("--max-t", max_t, "horizon; undecided trials report a timeout");
    b.opt("--trials", trials, "ensemble size");
    b.opt("--seed", seed, "master seed; all randomness derives from it");
    b.opt("--crossing", crossing, "boundary detection: grid | bridge");
    b.opt("--threads", threads, "worker threads (results do not depend on this)");
  }

  int crossing_code() const {
    if (crossing == "grid") return 0;
    if (crossing == "bridge") return 1;
    die_validation("--crossing must be grid or bridge");
  }
};

struct Common {
  std::string config_path;
  std::string out_path;
  std::string emit_config;

  void add(OptBook& b) {
    b.opt("--config", config_path, "JSON config; command-line flags override it");
    b.opt("--out", out_path, "write data here instead of stdout");
    b.opt("--emit-config", emit_config, "write the resolved config JSON here");
  }
};

json load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f.good()) die_validation("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  json cfg;
  try {
    cfg = json::parse(ss.str());
  } catch (const json::exception& e) {
    die_validation("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) die_validation("config " + path + ": expected a JSON object");
  return cfg;
}

void echo_config(const std::string& command, const OptBook& book, const Common& common) {
  json resolved = book.resolved();
  std::cerr << "config[" << command << "]: " << resolved.dump() << "\n";
  if (!common.emit_config.empty()) {
    std::ofstream f(common.emit_config, std::ios::binary);
    if (!f.good()) die_validation("cannot open " + common.emit_config);
    f << resolved.dump(2) << "\n";
  }
}

void write_sidecar(const std::string& out_path, const json& meta) {
  if (out_path.empty()) return;
  const std::string path = out_path + ".meta.json";
  std::ofstream f(path, std::ios::binary);
  if (!f.good()) die_validation("cannot open " + path);
  f << meta.dump(2) << "\n";
}

int to_internal_node(int node_1based) {
  if (node_1based < 1) die_validation("node indices are 1-based on the command line");
  return node_1based - 1;
}

struct GraphHandle {
  cddm_graph* g = nullptr;
  ~GraphHandle() { cddm_graph_free(g); }
};
struct ModelHandle {
  cddm_model* m = nullptr;
  ~ModelHandle() { cddm_model_free(m); }
};

// ---- subcommand bodies ------------------------------------------------------

struct GraphCmd {
  GraphOpts graph;
  Common common;
  bool certainty = false, spectrum = false, edges = false, correlation = false;
  double ou_theta = 0.0;

  int run() {
    if (spectrum + edges + correlation + certainty > 1)
      die_validation("pick at most one of --certainty, --spectrum, --edges, "
                     "--error-correlation");
    GraphHandle h{graph.make()};
    int n = 0;
    check(cddm_graph_n(h.g, &n), "graph_n");
    std::string out;
    if (spectrum) {
      std::vector<double> lambda(n);
      check(cddm_graph_spectrum(h.g, lambda.data(), nullptr), "graph_spectrum");
      out = "mode,lambda\n";
      for (int p = 0; p < n; ++p) out += std::to_string(p + 1) + "," + fmt(lambda[p]) + "\n";
    } else if (edges) {
      char* text = nullptr;
      check(cddm_graph_to_edge_list(h.g, &text), "graph_to_edge_list");
      out = take_string(text);
    } else if (correlation) {
      out = "node,correlation\n";
      for (int k = 0; k < n; ++k) {
        double c = 0.0;
        check(cddm_error_correlation(h.g, k, &c), "error_correlation");
        out += std::to_string(k + 1) + "," + fmt(c) + "\n";
      }
    } else {
      std::vector<double> mu(n);
      if (ou_theta > 0.0)
        check(cddm_graph_ou_certainty(h.g, ou_theta, mu.data()), "graph_ou_certainty");
      else
        check(cddm_graph_certainty(h.g, mu.data()), "graph_certainty");
      out = "node,mu\n";
      for (int k = 0; k < n; ++k) out += std::to_string(k + 1) + "," + fmt(mu[k]) + "\n";
    }
    write_output(out, common.out_path);
    return 0;
  }
};

struct MomentsCmd {
  GraphOpts graph;
  Common common;
  std::string process = "coupled";
  double beta = 0.1, sigma = 1.0, theta = 0.1;
  std::vector<double> times;

  int run() {
    if (times.empty()) die_validation("--times is required");
    GraphHandle h{graph.make()};
    int n = 0;
    check(cddm_graph_n(h.g, &n), "graph_n");
    int kind;
    double param;
    if (process == "coupled") {
      kind = 0;
      param = sigma;
    } else if (process == "error") {
      kind = 1;
      param = 0.0;
    } else if (process == "ou") {
      kind = 2;
      param = theta;
    } else {
      die_validation("--process must be coupled, error or ou");
    }
    const int nt = static_cast<int>(times.size());
    std::vector<double> mean(static_cast<std::size_t>(nt) * n);
    std::vector<double> cov(static_cast<std::size_t>(nt) * n * n);
    check(cddm_moments(h.g, kind, beta, param, times.data(), nt, mean.data(), cov.data()),
          "moments");
    std::string out = "t,i,j,mean_i,cov_ij\n";
    for (int t = 0; t < nt; ++t)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          out += fmt(times[t]) + "," + std::to_string(i + 1) + "," + std::to_string(j + 1) + ",";
          out += fmt(mean[t * n + i]) + "," + fmt(cov[(t * n + i) * n + j]) + "\n";
        }
    write_output(out, common.out_path);
    return 0;
  }
};

struct SimulateCmd {
  GraphOpts graph;
  SimOpts sim;
  Common common;
  std::string model = "coupled";
  double beta = 0.1, sigma = 1.0, theta = 0.1, mu = 1.0;
  int n = 1;
  std::vector<double> race_betas;
  std::string rule = "symmetric";
  std::vector<int> nodes;  // 1-based
  std::vector<double> eta;

  cddm_model* make_model() const {
    cddm_model* m = nullptr;
    const bool needs_graph =
        model == "coupled" || model == "error" || model == "coupled-ou" || model == "race";
    GraphHandle g;
    if (needs_graph) g.g = graph.make();
    if (model == "coupled")
      check(cddm_model_coupled_ddm(g.g, beta, sigma, &m), "model_coupled_ddm");
    else if (model == "centralized")
      check(cddm_model_centralized_ddm(n, beta, &m), "model_centralized_ddm");
    else if (model == "error")
      check(cddm_model_error_dynamics(g.g, &m), "model_error_dynamics");
    else if (model == "reduced")
      check(cddm_model_reduced_ddm(mu, beta, n, &m), "model_reduced_ddm");
    else if (model == "coupled-ou")
      check(cddm_model_coupled_ou(g.g, beta, theta, &m), "model_coupled_ou");
    else if (model == "reduced-ou")
      check(cddm_model_reduced_ou(mu, beta, theta, n, &m), "model_reduced_ou");
    else if (model == "race") {
      if (race_betas.size() < 2) die_validation("--race-betas needs one drift per alternative");
      check(cddm_model_coupled_race(g.g, race_betas.data(),
                                    static_cast<int>(race_betas.size()), sigma, &m),
            "model_coupled_race");
    } else {
      die_validation("--model must be coupled, centralized, error, reduced, coupled-ou, "
                     "reduced-ou or race");
    }
    return m;
  }

  cddm_rule make_rule(std::vector<int>& node_store) const {
    cddm_rule r{};
    if (rule == "none") {
      r.kind = 0;
      return r;
    }
    if (nodes.empty()) die_validation("--nodes is required for rule '" + rule + "'");
    if (eta.empty()) die_validation("--eta is required for rule '" + rule + "'");
    node_store.clear();
    for (int v : nodes) node_store.push_back(to_internal_node(v));
    r.nodes = node_store.data();
    r.n_nodes = static_cast<int>(node_store.size());
    r.eta = eta.data();
    r.n_eta = static_cast<int>(eta.size());
    if (rule == "symmetric")
      r.kind = 1;
    else if (rule == "upper")
      r.kind = 2;
    else if (rule == "race")
      r.kind = 3;
    else
      die_validation("--rule must be symmetric, upper, race or none");
    return r;
  }

  int run() const {
    ModelHandle m{make_model()};
    std::vector<int> node_store;
    const cddm_rule r = make_rule(node_store);
    cddm_sim_params p{sim.dt, sim.max_t, sim.trials, sim.seed, sim.crossing_code(), sim.threads};
    cddm_outcomes* o = nullptr;
    check(cddm_run_ensemble(m.m, &r, &p, &o), "run_ensemble");
    std::int64_t count = 0;
    check(cddm_outcomes_count(o, &count), "outcomes_count");
    std::string out = "trial,node,decision,decision_time,steps\n";
    for (std::int64_t i = 0; i < count; ++i) {
      cddm_outcome row;
      check(cddm_outcomes_get(o, i, &row), "outcomes_get");
      out += std::to_string(row.trial) + "," + std::to_string(row.node + 1) + "," +
             std::to_string(row.decision) + "," + fmt(row.time) + "," +
             std::to_string(row.steps) + "\n";
    }
    cddm_outcomes_free(o);
    write_output(out, common.out_path);
    write_sidecar(common.out_path, {{"command", "simulate"},
                                    {"version", cddm_version()},
                                    {"seed", sim.seed},
                                    {"dt", sim.dt},
                                    {"max_t", sim.max_t},
                                    {"trials", sim.trials},
                                    {"crossing", sim.crossing},
                                    {"model", model},
                                    {"rule", rule}});
    return 0;
  }
};

struct PdeCmd {
  Common common;
  bool profile = false;
  double mu = 1.0, beta = 0.1, sigma = 1.0, eta = 3.0, eta_bar = 0.0;
  int n = 9, ny = 201, ne = 201, npoints = 401;
  std::string field = "et";
  std::string binary_path;

  int run() const {
    const int which = field == "et" ? 0 : field == "er" ? 1 : -1;
    if (which < 0) die_validation("--field must be et or er");
    if (profile) {
      std::vector<double> x(npoints), v(npoints);
      check(cddm_solve_ddm_profile(beta, sigma, eta, which, npoints, x.data(), v.data()),
            "solve_ddm_profile");
      std::string out = "x,value\n";
      for (int i = 0; i < npoints; ++i) out += fmt(x[i]) + "," + fmt(v[i]) + "\n";
      write_output(out, common.out_path);
      return 0;
    }
    cddm_pde* p = nullptr;
    check(cddm_solve_reduced_pde(mu, beta, n, eta, which, eta_bar, ny, ne, &p),
          "solve_reduced_pde");
    cddm_pde_info info;
    check(cddm_pde_info_get(p, &info), "pde_info");
    std::cerr << "pde: " << info.ny << "x" << info.ne << " grid, residual "
              << fmt(info.residual) << " after " << info.sweeps << " sweeps\n";
    const std::string warning = cddm_pde_warning(p);
    if (!warning.empty()) std::cerr << "pde: warning: " << warning << "\n";
    if (!binary_path.empty())
      check(cddm_pde_write_binary(p, binary_path.c_str()), "pde_write_binary");
    char* csv = nullptr;
    check(cddm_pde_csv(p, &csv), "pde_csv");
    cddm_pde_free(p);
    write_output(take_string(csv), common.out_path);
    return 0;
  }
};

struct BoundsCmd {
  Common common;
  bool ou = false;
  double eta = 3.0, K = 2.0, mu = 1.0, beta = 0.1, t = -1.0;
  int n = 9;

  int run() const {
    std::string out;
    if (ou) {
      double mean = 0.0, lo = 0.0, hi = 0.0;
      check(cddm_ou_mean_fpt(mu, eta, &mean), "ou_mean_fpt");
      check(cddm_ou_mean_fpt_bounds(mu, eta, &lo, &hi), "ou_mean_fpt_bounds");
      if (t >= 0.0) {
        double p1 = 0.0, p2 = 0.0;
        check(cddm_ou_uniform_bound(K, mu, t, 0, &p1), "ou_uniform_bound");
        check(cddm_ou_uniform_bound(K, mu, t, 1, &p2), "ou_uniform_bound");
        out = "mean_fpt,bound_low,bound_high,p_stay_one_sided,p_stay_two_sided\n" + fmt(mean) +
              "," + fmt(lo) + "," + fmt(hi) + "," + fmt(p1) + "," + fmt(p2) + "\n";
      } else {
        out = "mean_fpt,bound_low,bound_high\n" + fmt(mean) + "," + fmt(lo) + "," + fmt(hi) +
              "\n";
      }
    } else {
      cddm_bounds b;
      check(cddm_reduced_performance_bounds(eta, K, mu, beta, n, &b),
            "reduced_performance_bounds");
      out = "et_low,et_high,er_low,er_high,confidence,K\n" + fmt(b.et_low) + "," +
            fmt(b.et_high) + "," + fmt(b.er_low) + "," + fmt(b.er_high) + "," +
            fmt(b.confidence) + "," + fmt(b.K) + "\n";
    }
    write_output(out, common.out_path);
    return 0;
  }
};

// scalar output normally; per-node table when a graph source is given
struct ThresholdsCmd {
  GraphOpts graph;
  Common common;
  std::string mode;  // wald | bayes | reward-rate | race | kbar
  double alpha = 0.01, beta = 0.1, mu = 0.0, cost = 1.0;
  double D = 0.0, Dp = 0.0, T_motor = 0.0, R = 0.05;
  int n = 0, m = 2;

  int run_per_node() {
    GraphHandle h{graph.make()};
    int gn = 0;
    check(cddm_graph_n(h.g, &gn), "graph_n");
    if (n == 0) n = gn;
    std::vector<double> mus(gn);
    check(cddm_graph_certainty(h.g, mus.data()), "graph_certainty");
    cddm_policy pol{};
    if (mode == "wald") {
      pol.kind = 1;
      pol.alpha = alpha;
    } else if (mode == "bayes") {
      pol.kind = 2;
      pol.cost = cost;
    } else {
      pol.kind = 3;
      pol.D = D;
      pol.Dp = Dp;
      pol.T_motor = T_motor;
    }
    std::vector<double> eta(gn);
    check(cddm_apply_policy(&pol, mus.data(), gn, beta, n, eta.data()), "apply_policy");
    std::string out = "node,eta\n";
    for (int k = 0; k < gn; ++k) out += std::to_string(k + 1) + "," + fmt(eta[k]) + "\n";
    write_output(out, common.out_path);
    return 0;
  }

  int run() {
    if (mode == "kbar") {
      double v = 0.0;
      check(cddm_kbar(beta, &v), "kbar");
      write_output(fmt(v) + "\n", common.out_path);
      return 0;
    }
    if (mode == "race") {
      double v = 0.0;
      check(cddm_race_threshold(m, R, &v), "race_threshold");
      write_output(fmt(v) + "\n", common.out_path);
      return 0;
    }
    if (graph.given()) return run_per_node();
    double v = 0.0;
    if (mode == "wald") {
      if (mu <= 0.0) die_validation("wald needs --mu (or a graph source for per-node output)");
      if (n == 0) die_validation("wald needs --n");
      check(cddm_wald_threshold(alpha, beta, n, mu, &v), "wald_threshold");
    } else if (mode == "bayes") {
      if (n == 0) die_validation("bayes needs --n");
      check(cddm_bayes_threshold(cost, beta, n, &v), "bayes_threshold");
    } else {
      if (n == 0) die_validation("reward-rate needs --n");
      check(cddm_reward_rate_threshold(D, Dp, T_motor, beta, n, &v), "reward_rate_threshold");
    }
    write_output(fmt(v) + "\n", common.out_path);
    return 0;
  }
};

struct CorrectionCmd {
  Common common;
  double beta = 0.1, eta = 3.0, dt = 2e-2;
  int graphs = 30;
  std::int64_t trials = 20000;
  std::uint64_t seed = 0;
  std::string crossing = "bridge";
  int threads = 1;

  int run() const {
    const int cross = crossing == "grid" ? 0 : crossing == "bridge" ? 1 : -1;
    if (cross < 0) die_validation("--crossing must be grid or bridge");
    cddm_regression* r = nullptr;
    check(cddm_correction_experiment(beta, eta, graphs, trials, seed, dt, cross, threads, &r),
          "correction_experiment");
    double slope = 0.0, rms = 0.0;
    std::int64_t points = 0;
    check(cddm_regression_info(r, &slope, &rms, &points), "regression_info");
    double kb = 0.0;
    check(cddm_kbar(beta, &kb), "kbar");
    std::cerr << "correction: slope " << fmt(slope) << " over " << points << " points (kbar "
              << fmt(kb) << "), residual rms " << fmt(rms) << "\n";
    char* csv = nullptr;
    check(cddm_regression_csv(r, &csv), "regression_csv");
    cddm_regression_free(r);
    write_output(take_string(csv), common.out_path);
    write_sidecar(common.out_path, {{"command", "correction"},
                                    {"version", cddm_version()},
                                    {"seed", seed},
                                    {"dt", dt},
                                    {"trials", trials},
                                    {"graphs", graphs},
                                    {"beta", beta},
                                    {"eta", eta},
                                    {"slope", slope},
                                    {"residual_rms", rms},
                                    {"kbar", kb}});
    return 0;
  }
};

struct CompareCmd {
  GraphOpts graph;
  SimOpts sim;
  Common common;
  int node = 1;  // 1-based
  double beta = 0.1;
  std::vector<double> etas;

  int run() const {
    if (etas.empty()) die_validation("--etas is required");
    GraphHandle h{graph.make()};
    cddm_table* t = nullptr;
    check(cddm_compare_models(h.g, to_internal_node(node), beta, etas.data(),
                              static_cast<int>(etas.size()), sim.trials, sim.seed, sim.dt,
                              sim.max_t, sim.crossing_code(), sim.threads, &t),
          "compare_models");
    char* csv = nullptr;
    check(cddm_table_csv(t, &csv), "table_csv");
    cddm_table_free(t);
    write_output(take_string(csv), common.out_path);
    write_sidecar(common.out_path, {{"command", "compare"},
                                    {"version", cddm_version()},
                                    {"seed", sim.seed},
                                    {"dt", sim.dt},
                                    {"max_t", sim.max_t},
                                    {"trials", sim.trials},
                                    {"crossing", sim.crossing},
                                    {"node", node},
                                    {"beta", beta}});
    return 0;
  }
};

// Finds "--config <path>" (or --config=<path>) ahead of the real parse so the
// file can seed option defaults.
std::string peek_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

// The subcommand path is the first bare token (plus a second one under
// "thresholds"); only --config takes a value that could be mistaken for one.
std::string peek_command_path(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      ++i;
      continue;
    }
    if (!a.empty() && a[0] == '-') continue;
    if (path.empty()) {
      path = a;
      if (path != "thresholds") return path;
    } else {
      return path + " " + a;
    }
  }
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled drift-diffusion decision toolkit"};
  app.require_subcommand(1);
  app.footer("Config files mirror the long option names; schema/runconfig.schema.json "
             "documents every key. Data goes to stdout (or --out); logs go to stderr.");
  app.set_version_flag("--version", std::string(cddm_version()));

  std::map<std::string, OptBook*> book_by_path;
  std::vector<std::unique_ptr<OptBook>> books;
  std::function<int()> run;
  std::string active_path;
  Common* active_common = nullptr;

  auto new_book = [&](CLI::App* sub, const std::string& path) -> OptBook& {
    books.push_back(std::make_unique<OptBook>(sub));
    book_by_path[path] = books.back().get();
    return *books.back();
  };
  auto arm = [&](CLI::App* sub, const std::string& path, Common* common,
                 std::function<int()> body) {
    sub->callback([&run, &active_path, &active_common, path, common, body]() {
      active_path = path;
      active_common = common;
      run = body;
    });
  };

  auto graph_cmd = std::make_shared<GraphCmd>();
  {
    CLI::App* sub = app.add_subcommand("graph", "spectrum and certainty indices of a network");
    OptBook& b = new_book(sub, "graph");
    graph_cmd->graph.add(b);
    graph_cmd->common.add(b);
    b.toggle("--certainty", graph_cmd->certainty, "node,mu table (default)");
    b.toggle("--spectrum", graph_cmd->spectrum, "mode,lambda table");
    b.toggle("--edges", graph_cmd->edges, "canonical edge list");
    b.toggle("--error-correlation", graph_cmd->correlation,
             "node,correlation of the error surrogate");
    b.opt("--ou-theta", graph_cmd->ou_theta, "certainty indices for the leaky variant");
    arm(sub, "graph", &graph_cmd->common, [graph_cmd]() { return graph_cmd->run(); });
  }

  auto moments_cmd = std::make_shared<MomentsCmd>();
  {
    CLI::App* sub = app.add_subcommand("moments", "exact Gaussian mean/covariance curves");
    OptBook& b = new_book(sub, "moments");
    moments_cmd->graph.add(b);
    moments_cmd->common.add(b);
    b.opt("--process", moments_cmd->process, "coupled | error | ou");
    b.opt("--beta", moments_cmd->beta, "drift");
    b.opt("--sigma", moments_cmd->sigma, "noise scale (coupled)");
    b.opt("--theta", moments_cmd->theta, "leak rate (ou)");
    b.list("--times", moments_cmd->times, "evaluation times");
    arm(sub, "moments", &moments_cmd->common, [moments_cmd]() { return moments_cmd->run(); });
  }

  auto simulate_cmd = std::make_shared<SimulateCmd>();
  {
    CLI::App* sub =
        app.add_subcommand("simulate", "Euler-Maruyama ensembles with stopping rules");
    OptBook& b = new_book(sub, "simulate");
    simulate_cmd->graph.add(b);
    simulate_cmd->sim.add(b);
    simulate_cmd->common.add(b);
    b.opt("--model", simulate_cmd->model,
          "coupled | centralized | error | reduced | coupled-ou | reduced-ou | race");
    b.opt("--beta", simulate_cmd->beta, "drift");
    b.opt("--sigma", simulate_cmd->sigma, "noise scale (coupled, race)");
    b.opt("--theta", simulate_cmd->theta, "leak rate (ou models)");
    b.opt("--mu", simulate_cmd->mu, "certainty index (reduced models)");
    b.opt("--n", simulate_cmd->n, "network size (centralized, reduced)");
    b.list("--race-betas", simulate_cmd->race_betas, "per-alternative drifts (race)");
    b.opt("--rule", simulate_cmd->rule, "symmetric | upper | race | none");
    b.list("--nodes", simulate_cmd->nodes, "watched nodes, 1-based");
    b.list("--eta", simulate_cmd->eta, "thresholds: one per node, or one for all");
    arm(sub, "simulate", &simulate_cmd->common,
        [simulate_cmd]() { return simulate_cmd->run(); });
  }

  auto pde_cmd = std::make_shared<PdeCmd>();
  {
    CLI::App* sub = app.add_subcommand("pde", "elliptic first-passage predictions");
    OptBook& b = new_book(sub, "pde");
    pde_cmd->common.add(b);
    b.toggle("--profile", pde_cmd->profile, "one-dimensional scalar-DDM check problem");
    b.opt("--mu", pde_cmd->mu, "certainty index");
    b.opt("--beta", pde_cmd->beta, "drift");
    b.opt("--sigma", pde_cmd->sigma, "noise scale (profile mode)");
    b.opt("--n", pde_cmd->n, "network size");
    b.opt("--eta", pde_cmd->eta, "decision threshold");
    b.opt("--eta-bar", pde_cmd->eta_bar, "error-coordinate truncation (0 = 6/sqrt(mu))");
    b.opt("--ny", pde_cmd->ny, "grid points in y (odd, >= 51)");
    b.opt("--ne", pde_cmd->ne, "grid points in eps (odd, >= 51)");
    b.opt("--npoints", pde_cmd->npoints, "grid points (profile mode)");
    b.opt("--field", pde_cmd->field, "et (mean decision time) | er (error probability)");
    b.opt("--binary", pde_cmd->binary_path, "also write the binary field dump here");
    arm(sub, "pde", &pde_cmd->common, [pde_cmd]() { return pde_cmd->run(); });
  }

  auto bounds_cmd = std::make_shared<BoundsCmd>();
  {
    CLI::App* sub =
        app.add_subcommand("bounds", "first-passage envelopes and performance sandwich");
    OptBook& b = new_book(sub, "bounds");
    bounds_cmd->common.add(b);
    b.toggle("--ou", bounds_cmd->ou, "error-process first-passage stats instead of the sandwich");
    b.opt("--eta", bounds_cmd->eta, "threshold (sandwich) or error threshold (--ou)");
    b.opt("--K", bounds_cmd->K, "containment level in units of 1/sqrt(mu)");
    b.opt("--mu", bounds_cmd->mu, "certainty index");
    b.opt("--beta", bounds_cmd->beta, "drift");
    b.opt("--n", bounds_cmd->n, "network size");
    b.opt("--t", bounds_cmd->t, "horizon for the containment probabilities (--ou)");
    arm(sub, "bounds", &bounds_cmd->common, [bounds_cmd]() { return bounds_cmd->run(); });
  }

  auto thresholds_cmd = std::make_shared<ThresholdsCmd>();
  {
    CLI::App* sub = app.add_subcommand("thresholds", "threshold selection rules");
    sub->require_subcommand(1);
    const struct {
      const char* name;
      const char* help;
    } kinds[] = {
        {"wald", "threshold meeting a target error probability"},
        {"bayes", "cost-optimal corrected threshold"},
        {"reward-rate", "reward-rate-optimal corrected threshold"},
        {"race", "posterior-odds margin for an m-alternative race"},
        {"kbar", "fitted slope of the threshold correction"},
    };
    for (const auto& kind : kinds) {
      CLI::App* mode = sub->add_subcommand(kind.name, kind.help);
      const std::string name = kind.name;
      const std::string path = "thresholds " + name;
      OptBook& b = new_book(mode, path);
      thresholds_cmd->common.add(b);
      if (name == "wald" || name == "bayes" || name == "reward-rate") {
        thresholds_cmd->graph.add(b);
        b.opt("--beta", thresholds_cmd->beta, "drift");
        b.opt("--n", thresholds_cmd->n, "network size (defaults to the graph size)");
      }
      if (name == "wald") {
        b.opt("--alpha", thresholds_cmd->alpha, "target error probability, in (0, 1/2)");
        b.opt("--mu", thresholds_cmd->mu, "certainty index (scalar mode)");
      } else if (name == "bayes") {
        b.opt("--cost", thresholds_cmd->cost, "decision-time cost");
      } else if (name == "reward-rate") {
        b.opt("--D", thresholds_cmd->D, "response-stimulus interval");
        b.opt("--Dp", thresholds_cmd->Dp, "penalty delay");
        b.opt("--T-motor", thresholds_cmd->T_motor, "motor time");
      } else if (name == "race") {
        b.opt("--m", thresholds_cmd->m, "alternatives (>= 2)");
        b.opt("--R", thresholds_cmd->R, "max error probability, in (0, (m-1)/m)");
      } else {
        b.opt("--beta", thresholds_cmd->beta, "drift");
      }
      arm(mode, path, &thresholds_cmd->common, [thresholds_cmd, name]() {
        thresholds_cmd->mode = name;
        return thresholds_cmd->run();
      });
    }
  }

  auto correction_cmd = std::make_shared<CorrectionCmd>();
  {
    CLI::App* sub =
        app.add_subcommand("correction", "threshold-correction regression experiment");
    OptBook& b = new_book(sub, "correction");
    correction_cmd->common.add(b);
    b.opt("--beta", correction_cmd->beta, "drift");
    b.opt("--eta", correction_cmd->eta, "threshold at every node");
    b.opt("--graphs", correction_cmd->graphs, "number of sampled graphs");
    b.opt("--trials", correction_cmd->trials, "trials per graph (shared across its nodes)");
    b.opt("--seed", correction_cmd->seed, "master seed");
    b.opt("--dt", correction_cmd->dt, "Euler step");
    b.opt("--crossing", correction_cmd->crossing, "grid | bridge");
    b.opt("--threads", correction_cmd->threads, "worker threads");
    arm(sub, "correction", &correction_cmd->common,
        [correction_cmd]() { return correction_cmd->run(); });
  }

  auto compare_cmd = std::make_shared<CompareCmd>();
  {
    CLI::App* sub = app.add_subcommand(
        "compare", "coupled / reduced / centralized / corrected / pde table");
    OptBook& b = new_book(sub, "compare");
    compare_cmd->graph.add(b);
    compare_cmd->sim.add(b);
    compare_cmd->common.add(b);
    b.opt("--node", compare_cmd->node, "watched node, 1-based");
    b.opt("--beta", compare_cmd->beta, "drift");
    b.list("--etas", compare_cmd->etas, "thresholds to sweep");
    arm(sub, "compare", &compare_cmd->common, [compare_cmd]() { return compare_cmd->run(); });
  }

  // config file values become defaults before the real parse; flags then win
  const std::string config_path = peek_config_path(argc, argv);
  if (!config_path.empty()) {
    const std::string path = peek_command_path(argc, argv);
    auto it = book_by_path.find(path);
    if (it == book_by_path.end())
      die_validation("--config needs a recognized subcommand (got '" + path + "')");
    it->second->apply_config(load_config(config_path));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!run) die_validation("no subcommand given");
  if (active_common) echo_config(active_path, *book_by_path.at(active_path), *active_common);
  return run();
}
