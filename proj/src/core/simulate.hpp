#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/moments.hpp"

namespace cddm {

// Crossing detection. `grid` checks the state at step boundaries only (the
// documented default; detection bias is O(sqrt(dt))). `bridge` additionally
// draws one uniform per watched node per step and flags an intra-step
// excursion with the Brownian-bridge probability exp(-2 d0 d1 / (sigma^2 dt));
// decisions are still reported at the step boundary, the residual bias is
// O(dt). Race rules support grid detection only.
enum class CrossingMode { grid, bridge };

struct StoppingRule {
  enum class Kind { none, symmetric, upper, race_margin };
  Kind kind = Kind::none;
  std::vector<int> nodes;    // watched nodes
  std::vector<double> eta;   // per watched node, > 0

  static StoppingRule none();
  static StoppingRule symmetric(std::vector<int> nodes, std::vector<double> eta);
  static StoppingRule symmetric(std::vector<int> nodes, double eta);
  static StoppingRule upper(std::vector<int> nodes, double eta);
  static StoppingRule race_margin(std::vector<int> nodes, double eta);
};

// decision: symmetric 1 = upper boundary, 0 = lower; upper rule always 1;
// race_margin: winning alternative id; -1 = timeout
struct TrialOutcome {
  std::int64_t trial = 0;
  int node = 0;
  int decision = -1;
  double time = 0.0;
  std::int64_t steps = 0;
};

struct SimParams {
  double dt = 1e-3;
  double max_t = 500.0;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  CrossingMode crossing = CrossingMode::grid;
  int threads = 1;  // <= 1 runs serial; results are independent of the value
};

// Noise sub-stream view: the trial stream fills `raw_dim` gaussians per step
// and coordinate c consumes channel[c]. Defaults to the identity on the
// model's own noise dimension. Lets a lower-dimensional model replay an exact
// sub-stream of a wider one (race block decomposition).
struct NoiseLayout {
  int raw_dim = 0;
  std::vector<int> channel;
};

// one outcome per watched node (a single timeout outcome for rule `none`);
// the shared path keeps evolving until every watched node has decided
std::vector<TrialOutcome> run_trial(const ModelSpec& m, const StoppingRule& rule,
                                    const SimParams& p, std::int64_t trial,
                                    const NoiseLayout& layout = {});

// outcomes for trials 0..trials-1 concatenated in trial order; trial i uses
// NoiseStream(seed, i), so the set is reproducible and order-independent
std::vector<TrialOutcome> run_ensemble(const ModelSpec& m, const StoppingRule& rule,
                                       const SimParams& p, const NoiseLayout& layout = {});

// full Euler path, rows are steps 0..steps (row 0 is the zero initial state)
Eigen::MatrixXd simulate_path(const ModelSpec& m, double dt, int steps, std::uint64_t seed,
                              std::int64_t trial, const NoiseLayout& layout = {});

// ensemble mean/covariance at the requested times (snapped to the step grid);
// deterministic reduction in trial order
MomentCurve estimate_moments(const ModelSpec& m, const std::vector<double>& times,
                             const SimParams& p);

// trial,node,decision,decision_time,steps
void write_outcomes_csv(const std::vector<TrialOutcome>& outcomes, const std::string& path);
std::string outcomes_to_csv(const std::vector<TrialOutcome>& outcomes);

}  // namespace cddm
