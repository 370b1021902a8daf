#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/simulate.hpp"

namespace cddm {

// Equal-width histogram; counts.size() + 1 == edges.size().
struct FptHistogram {
  std::vector<double> edges;
  std::vector<std::int64_t> counts;
};

// Monte Carlo decision statistics at one node. Error rate and mean decision
// time are taken over decided trials only; the timeout fraction is reported
// alongside. Histogram: sqrt(trials) equal-width bins spanning the observed
// decision times, so counts sum to `decided`.
struct PerformanceEstimate {
  int node = 0;
  std::int64_t trials = 0;
  std::int64_t decided = 0;
  double er_hat = 0.0;
  double er_se = 0.0;
  double et_hat = 0.0;
  double et_se = 0.0;
  double timeout_fraction = 0.0;
  FptHistogram fpt_histogram;
};

// Runs an ensemble and aggregates the outcomes at `node` (which must be
// watched by `rule`). Lower-boundary crossings count as errors; under a race
// rule, errors are decisions against the highest-drift alternative.
// Fails with too_many_timeouts when more than 10% of trials hit max_t.
PerformanceEstimate estimate_performance(const ModelSpec& spec, const StoppingRule& rule,
                                         int node, std::int64_t trials, double dt, double max_t,
                                         std::uint64_t seed,
                                         CrossingMode crossing = CrossingMode::grid,
                                         int threads = 1);

// log((1 - er)/er); degenerate_er at the endpoints
double log_likelihood_no_error(double er);

// Slope fit of beta * (centralized ET - per-node coupled ET) against
// 1/sqrt(mu_k) across an Erdos-Renyi ensemble.
struct CorrectionRegression {
  std::vector<std::pair<double, double>> points;  // (1/sqrt(mu_k), beta * dT_k)
  double slope = 0.0;
  double residual_rms = 0.0;
  double beta = 0.0;
  double eta = 0.0;
};

// Samples `graph_count` connected Erdos-Renyi graphs (n uniform in {3..10},
// edge probability 1.1 log(n)/n), runs the coupled DDM with every node
// watched at threshold eta, and regresses beta * dT_k through the origin on
// 1/sqrt(mu_k). dT_k compares against the exact centralized mean decision
// time, not a simulated one. One ensemble serves all nodes of a graph, so
// trials_per_node is the per-graph trial count.
CorrectionRegression correction_experiment(double beta, double eta, int graph_count,
                                           std::int64_t trials_per_node, std::uint64_t seed,
                                           double dt = 2e-2,
                                           CrossingMode crossing = CrossingMode::bridge,
                                           int threads = 1);

struct CompareRow {
  double eta = 0.0;
  std::string model;  // coupled | reduced | centralized | corrected | pde
  double er = 0.0;
  double et = 0.0;
};

// Five-way performance table at one node across thresholds: Monte Carlo for
// the coupled and reduced models, closed forms for the centralized and
// threshold-corrected ones, and the elliptic-PDE prediction. Rows come out
// in that order per eta.
std::vector<CompareRow> compare_models(const Graph& g, int node, double beta,
                                       const std::vector<double>& etas, std::int64_t trials,
                                       std::uint64_t seed, double dt = 1e-3,
                                       double max_t = 500.0,
                                       CrossingMode crossing = CrossingMode::grid,
                                       int threads = 1);

std::string compare_to_csv(const std::vector<CompareRow>& rows);
std::string regression_to_csv(const CorrectionRegression& r);
std::string histogram_to_csv(const FptHistogram& h);

}  // namespace cddm
