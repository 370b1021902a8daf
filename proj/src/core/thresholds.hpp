#pragma once

#include <vector>

#include "core/analysis.hpp"

namespace cddm {

// Fitted slope of the threshold correction against 1/sqrt(mu):
// kbar(beta) = e^{-1/(4 sqrt(beta))} / (sqrt(beta) (1 + beta/3)).
// Vanishes at both ends of the beta range; peaks around beta ~ 0.055.
double kbar(double beta);

// max{0, eta - kbar(beta)/sqrt(mu)}: the centralized threshold whose scalar
// performance tracks a coupled node with certainty index mu at threshold eta.
double corrected_threshold(double eta, double beta, double mu);

// ddm_performance(beta, 1/sqrt(n), corrected_threshold(eta, beta, mu)).
// A fully clamped threshold gives the degenerate (ET = 0, ER = 1/2).
DdmPerformance corrected_performance(double eta, double beta, double mu, int n);

// Per-node threshold meeting error probability alpha at a node with
// certainty index mu: kbar(beta)/sqrt(mu) + log((1-alpha)/alpha)/(2 beta n).
// Small-alpha approximation; alpha in (0, 1/2).
double wald_threshold(double alpha, double beta, int n, double mu);

// (1 - 2 alpha)/beta * wald_threshold(alpha, beta, n, mu); decreasing in mu.
double wald_expected_time(double alpha, double beta, int n, double mu);

// Root of  2 c beta^2 n - 4 beta n eta + e^{-2 beta n eta} - e^{2 beta n eta} = 0.
// The left side is positive at eta = 0 and strictly decreasing, so the root
// is unique. Bisection; bracket found by doubling, giving up past eta = 1e3
// (no_root, which can only mean numeric breakdown). Residual <= 1e-10.
double bayes_threshold(double cost, double beta, int n);

// Root of  e^{2 beta n eta} - 1 = 2 beta^2 n (D_total - eta/beta)  with
// D_total = D + Dp + T_motor. Left side increasing, right side decreasing,
// root bracketed in [0, beta D_total]. no_root when D_total <= 0.
// Residual <= 1e-10.
double reward_rate_threshold(double D, double Dp, double T_motor, double beta, int n);

// log((m-1)/(m R)) for an m-alternative race stopping when the leader is R
// ahead in posterior odds; requires m >= 2 and R in (0, (m-1)/m) so the
// threshold is positive.
double race_threshold(int m, double R);

struct ThresholdPolicy {
  enum class Kind { fixed, wald, bayes, reward_rate };
  Kind kind = Kind::fixed;
  double eta = 0.0;      // fixed
  double alpha = 0.0;    // wald
  double cost = 0.0;     // bayes
  double D = 0.0;        // reward_rate
  double Dp = 0.0;
  double T_motor = 0.0;

  static ThresholdPolicy fixed(double eta);
  static ThresholdPolicy wald(double alpha);
  static ThresholdPolicy bayes(double cost);
  static ThresholdPolicy reward_rate(double D, double Dp, double T_motor);
};

// Resolve a policy into one threshold per node. Fixed and Wald are direct;
// Bayes and reward-rate solve for the corrected threshold once and add back
// kbar(beta)/sqrt(mu_k), so central nodes run with smaller true thresholds
// while the corrected performance model predicts identical (ET, ER) for all.
std::vector<double> apply_policy(const ThresholdPolicy& policy, const std::vector<double>& mu,
                                 double beta, int n);

}  // namespace cddm
