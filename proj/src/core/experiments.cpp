#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/analysis.hpp"
#include "core/num_format.hpp"
#include "core/pde.hpp"
#include "core/rng.hpp"
#include "core/status.hpp"
#include "core/thresholds.hpp"

namespace cddm {

namespace {

FptHistogram make_histogram(std::vector<double> times, std::int64_t trials) {
  FptHistogram h;
  if (times.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(times.begin(), times.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi <= lo) {
    // all decisions landed on one grid time; a single degenerate bin keeps
    // the counts-sum invariant
    h.edges = {lo, hi};
    h.counts = {static_cast<std::int64_t>(times.size())};
    return h;
  }
  const int bins =
      std::max<int>(1, static_cast<int>(std::llround(std::sqrt(static_cast<double>(trials)))));
  h.edges.resize(bins + 1);
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + width * b;
  h.edges[bins] = hi;
  for (double t : times) {
    int idx = static_cast<int>((t - lo) / width);
    if (idx >= bins) idx = bins - 1;
    ++h.counts[idx];
  }
  return h;
}

// under a race rule errors are decisions against the highest-drift alternative
int race_correct_alternative(const ModelSpec& spec) {
  int best = 0;
  for (int a = 1; a < spec.alternatives; ++a)
    if (spec.b[a] > spec.b[best]) best = a;
  return best;
}

}  // namespace

PerformanceEstimate estimate_performance(const ModelSpec& spec, const StoppingRule& rule,
                                         int node, std::int64_t trials, double dt, double max_t,
                                         std::uint64_t seed, CrossingMode crossing, int threads) {
  require(trials >= 100, Status::invalid_argument,
          "estimate_performance: need at least 100 trials");
  require(std::find(rule.nodes.begin(), rule.nodes.end(), node) != rule.nodes.end(),
          Status::invalid_argument, "estimate_performance: node is not watched by the rule");

  SimParams p;
  p.dt = dt;
  p.max_t = max_t;
  p.trials = trials;
  p.seed = seed;
  p.crossing = crossing;
  p.threads = threads;
  const std::vector<TrialOutcome> all = run_ensemble(spec, rule, p);

  PerformanceEstimate est;
  est.node = node;
  est.trials = trials;

  const bool race = rule.kind == StoppingRule::Kind::race_margin;
  const int correct = race ? race_correct_alternative(spec) : 1;

  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(trials));
  std::int64_t errors = 0;
  double sum = 0.0, sum2 = 0.0;
  for (const TrialOutcome& o : all) {
    if (o.node != node) continue;
    if (o.decision < 0) continue;  // timeout
    if (o.decision != correct) ++errors;
    times.push_back(o.time);
    sum += o.time;
    sum2 += o.time * o.time;
  }
  est.decided = static_cast<std::int64_t>(times.size());
  est.timeout_fraction =
      static_cast<double>(trials - est.decided) / static_cast<double>(trials);
  if (est.timeout_fraction > 0.1)
    fail(Status::too_many_timeouts,
         "estimate_performance: " + format_double(est.timeout_fraction * 100.0) +
             "% of trials hit max_t; raise max_t");

  const double nd = static_cast<double>(est.decided);
  est.er_hat = static_cast<double>(errors) / nd;
  est.er_se = std::sqrt(est.er_hat * (1.0 - est.er_hat) / nd);
  est.et_hat = sum / nd;
  if (est.decided > 1) {
    const double var = std::max(0.0, (sum2 - nd * est.et_hat * est.et_hat) / (nd - 1.0));
    est.et_se = std::sqrt(var / nd);
  }
  est.fpt_histogram = make_histogram(std::move(times), trials);
  return est;
}

double log_likelihood_no_error(double er) {
  require(er > 0.0 && er < 1.0, Status::degenerate_er,
          "log_likelihood_no_error: er must lie strictly inside (0, 1)");
  return std::log((1.0 - er) / er);
}

CorrectionRegression correction_experiment(double beta, double eta, int graph_count,
                                           std::int64_t trials_per_node, std::uint64_t seed,
                                           double dt, CrossingMode crossing, int threads) {
  require(beta > 0.0, Status::invalid_argument, "correction_experiment: beta must be positive");
  require(eta > 0.0, Status::invalid_argument, "correction_experiment: eta must be positive");
  require(graph_count >= 1, Status::invalid_argument,
          "correction_experiment: need at least one graph");
  require(trials_per_node >= 100, Status::invalid_argument,
          "correction_experiment: need at least 100 trials per node");

  CorrectionRegression reg;
  reg.beta = beta;
  reg.eta = eta;

  for (int gi = 0; gi < graph_count; ++gi) {
    // three independent draws per graph: size, topology seed, ensemble seed
    std::uint64_t sm = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(gi + 1);
    const std::uint64_t pick = splitmix64(sm);
    const std::uint64_t topo_seed = splitmix64(sm);
    const std::uint64_t run_seed = splitmix64(sm);

    const int n = 3 + static_cast<int>(pick % 8);  // uniform over {3, ..., 10}
    const double p_edge = 1.1 * std::log(static_cast<double>(n)) / n;
    const Graph g = Graph::erdos_renyi(n, p_edge, topo_seed);
    const Spectrum spec = spectrum(g);
    const std::vector<double> mu = certainty_indices(spec);

    std::vector<int> nodes(n);
    for (int k = 0; k < n; ++k) nodes[k] = k;
    const ModelSpec model = coupled_ddm(g, beta, 1.0);
    const StoppingRule rule = StoppingRule::symmetric(nodes, eta);

    SimParams sp;
    sp.dt = dt;
    sp.max_t = std::max(200.0, 12.0 * eta / beta);
    sp.trials = trials_per_node;
    sp.seed = run_seed;
    sp.crossing = crossing;
    sp.threads = threads;
    const std::vector<TrialOutcome> outcomes = run_ensemble(model, rule, sp);

    const double et_cen =
        ddm_performance(beta, 1.0 / std::sqrt(static_cast<double>(n)), eta).mean_time;

    std::vector<double> sum(n, 0.0);
    std::vector<std::int64_t> cnt(n, 0);
    for (const TrialOutcome& o : outcomes) {
      if (o.decision < 0) continue;
      sum[o.node] += o.time;
      ++cnt[o.node];
    }
    for (int k = 0; k < n; ++k) {
      require(cnt[k] > trials_per_node / 2, Status::too_many_timeouts,
              "correction_experiment: node timed out in most trials; raise max_t");
      const double et_k = sum[k] / static_cast<double>(cnt[k]);
      reg.points.emplace_back(1.0 / std::sqrt(mu[k]), beta * (et_cen - et_k));
    }
  }

  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : reg.points) {
    sxx += x * x;
    sxy += x * y;
  }
  reg.slope = sxy / sxx;
  double ss = 0.0;
  for (const auto& [x, y] : reg.points) {
    const double r = y - reg.slope * x;
    ss += r * r;
  }
  reg.residual_rms = std::sqrt(ss / static_cast<double>(reg.points.size()));
  return reg;
}

std::vector<CompareRow> compare_models(const Graph& g, int node, double beta,
                                       const std::vector<double>& etas, std::int64_t trials,
                                       std::uint64_t seed, double dt, double max_t,
                                       CrossingMode crossing, int threads) {
  require(!etas.empty(), Status::invalid_argument, "compare_models: eta list must be non-empty");
  const int n = g.n();
  require(node >= 0 && node < n, Status::invalid_argument, "compare_models: node out of range");
  const Spectrum s = spectrum(g);
  const double mu_k = certainty_index(s, node);
  const double sigma_cen = 1.0 / std::sqrt(static_cast<double>(n));

  const ModelSpec coupled = coupled_ddm(g, beta, 1.0);
  const ModelSpec reduced = reduced_ddm(mu_k, beta, n);

  std::vector<CompareRow> rows;
  rows.reserve(etas.size() * 5);
  for (double eta : etas) {
    require(eta > 0.0, Status::invalid_argument, "compare_models: thresholds must be positive");

    const PerformanceEstimate mc_c =
        estimate_performance(coupled, StoppingRule::symmetric({node}, eta), node, trials, dt,
                             max_t, seed, crossing, threads);
    rows.push_back({eta, "coupled", mc_c.er_hat, mc_c.et_hat});

    const PerformanceEstimate mc_r =
        estimate_performance(reduced, StoppingRule::symmetric({0}, eta), 0, trials, dt, max_t,
                             seed, crossing, threads);
    rows.push_back({eta, "reduced", mc_r.er_hat, mc_r.et_hat});

    const DdmPerformance cen = ddm_performance(beta, sigma_cen, eta);
    rows.push_back({eta, "centralized", cen.error_rate, cen.mean_time});

    const DdmPerformance cor = corrected_performance(eta, beta, mu_k, n);
    rows.push_back({eta, "corrected", cor.error_rate, cor.mean_time});

    const PdeSolution pt = solve_reduced_pde(mu_k, beta, n, eta, PdeField::mean_time);
    const PdeSolution pe = solve_reduced_pde(mu_k, beta, n, eta, PdeField::error_prob);
    rows.push_back({eta, "pde", pe.at(0.0, 0.0), pt.at(0.0, 0.0)});
  }
  return rows;
}

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
  std::string out = "eta,model,er,et\n";
  for (const CompareRow& r : rows) {
    append_double(out, r.eta);
    out += ',';
    out += r.model;
    out += ',';
    append_double(out, r.er);
    out += ',';
    append_double(out, r.et);
    out += '\n';
  }
  return out;
}

std::string regression_to_csv(const CorrectionRegression& r) {
  std::string out = "inv_sqrt_mu,beta_delta_t\n";
  for (const auto& [x, y] : r.points) {
    append_double(out, x);
    out += ',';
    append_double(out, y);
    out += '\n';
  }
  return out;
}

std::string histogram_to_csv(const FptHistogram& h) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    append_double(out, h.edges[b]);
    out += ',';
    append_double(out, h.edges[b + 1]);
    out += ',';
    out += std::to_string(h.counts[b]);
    out += '\n';
  }
  return out;
}

}  // namespace cddm
