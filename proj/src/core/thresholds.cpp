#include "core/thresholds.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "core/status.hpp"

namespace cddm {

namespace {

// Bisect f on [a, b] with f(a) and f(b) of opposite sign, down to adjacent
// doubles. The caller checks the residual; bisection itself cannot fail.
double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double kbar(double beta) {
  require(beta > 0.0, Status::invalid_argument, "kbar: beta must be positive");
  const double s = std::sqrt(beta);
  return std::exp(-1.0 / (4.0 * s)) / (s * (1.0 + beta / 3.0));
}

double corrected_threshold(double eta, double beta, double mu) {
  require(eta >= 0.0, Status::invalid_argument, "corrected_threshold: eta must be >= 0");
  require(mu > 0.0, Status::invalid_argument, "corrected_threshold: mu must be positive");
  const double c = eta - kbar(beta) / std::sqrt(mu);
  return c > 0.0 ? c : 0.0;
}

DdmPerformance corrected_performance(double eta, double beta, double mu, int n) {
  require(n >= 1, Status::invalid_argument, "corrected_performance: n must be >= 1");
  return ddm_performance(beta, 1.0 / std::sqrt(static_cast<double>(n)),
                         corrected_threshold(eta, beta, mu));
}

double wald_threshold(double alpha, double beta, int n, double mu) {
  require(alpha > 0.0 && alpha < 0.5, Status::invalid_argument,
          "wald_threshold: alpha must lie in (0, 1/2)");
  require(n >= 1, Status::invalid_argument, "wald_threshold: n must be >= 1");
  require(mu > 0.0, Status::invalid_argument, "wald_threshold: mu must be positive");
  return kbar(beta) / std::sqrt(mu) +
         std::log((1.0 - alpha) / alpha) / (2.0 * beta * static_cast<double>(n));
}

double wald_expected_time(double alpha, double beta, int n, double mu) {
  return (1.0 - 2.0 * alpha) / beta * wald_threshold(alpha, beta, n, mu);
}

double bayes_threshold(double cost, double beta, int n) {
  require(cost > 0.0, Status::invalid_argument, "bayes_threshold: cost must be positive");
  require(beta > 0.0, Status::invalid_argument, "bayes_threshold: beta must be positive");
  require(n >= 1, Status::invalid_argument, "bayes_threshold: n must be >= 1");
  const double bn = beta * static_cast<double>(n);
  const double f0 = 2.0 * cost * beta * bn;
  const auto f = [&](double eta) {
    // exp difference written as -2 sinh to avoid cancellation near eta = 0
    return f0 - 4.0 * bn * eta - 2.0 * std::sinh(2.0 * bn * eta);
  };
  double hi = 1.0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e3) fail(Status::no_root, "bayes_threshold: no sign change up to eta = 1e3");
  }
  const double root = bisect(f, 0.0, hi, f0);
  require(std::abs(f(root)) <= 1e-10, Status::no_root,
          "bayes_threshold: residual exceeds 1e-10 at the bisection limit");
  return root;
}

double reward_rate_threshold(double D, double Dp, double T_motor, double beta, int n) {
  require(beta > 0.0, Status::invalid_argument, "reward_rate_threshold: beta must be positive");
  require(n >= 1, Status::invalid_argument, "reward_rate_threshold: n must be >= 1");
  const double total = D + Dp + T_motor;
  if (!(total > 0.0))
    fail(Status::no_root, "reward_rate_threshold: D + Dp + T_motor must be positive");
  const double bn = beta * static_cast<double>(n);
  const auto f = [&](double eta) {
    return std::expm1(2.0 * bn * eta) - 2.0 * beta * bn * (total - eta / beta);
  };
  // f(0) < 0 and the right side hits zero at eta = beta * total, where the
  // left side is positive: a guaranteed bracket.
  const double root = bisect(f, 0.0, beta * total, f(0.0));
  require(std::abs(f(root)) <= 1e-10, Status::no_root,
          "reward_rate_threshold: residual exceeds 1e-10 at the bisection limit");
  return root;
}

double race_threshold(int m, double R) {
  require(m >= 2, Status::invalid_argument, "race_threshold: need at least two alternatives");
  const double cap = static_cast<double>(m - 1) / static_cast<double>(m);
  require(R > 0.0 && R < cap, Status::invalid_argument,
          "race_threshold: R must lie in (0, (m-1)/m)");
  return std::log(static_cast<double>(m - 1) / (static_cast<double>(m) * R));
}

ThresholdPolicy ThresholdPolicy::fixed(double eta) {
  ThresholdPolicy p;
  p.kind = Kind::fixed;
  p.eta = eta;
  return p;
}

ThresholdPolicy ThresholdPolicy::wald(double alpha) {
  ThresholdPolicy p;
  p.kind = Kind::wald;
  p.alpha = alpha;
  return p;
}

ThresholdPolicy ThresholdPolicy::bayes(double cost) {
  ThresholdPolicy p;
  p.kind = Kind::bayes;
  p.cost = cost;
  return p;
}

ThresholdPolicy ThresholdPolicy::reward_rate(double D, double Dp, double T_motor) {
  ThresholdPolicy p;
  p.kind = Kind::reward_rate;
  p.D = D;
  p.Dp = Dp;
  p.T_motor = T_motor;
  return p;
}

std::vector<double> apply_policy(const ThresholdPolicy& policy, const std::vector<double>& mu,
                                 double beta, int n) {
  require(!mu.empty(), Status::invalid_argument, "apply_policy: mu must be non-empty");
  require(beta > 0.0, Status::invalid_argument, "apply_policy: beta must be positive");
  for (double m : mu)
    require(m > 0.0, Status::invalid_argument, "apply_policy: certainty indices must be positive");

  std::vector<double> eta(mu.size(), 0.0);
  switch (policy.kind) {
    case ThresholdPolicy::Kind::fixed: {
      require(policy.eta >= 0.0, Status::invalid_argument, "apply_policy: fixed eta must be >= 0");
      for (auto& e : eta) e = policy.eta;
      break;
    }
    case ThresholdPolicy::Kind::wald: {
      for (std::size_t k = 0; k < mu.size(); ++k)
        eta[k] = wald_threshold(policy.alpha, beta, n, mu[k]);
      break;
    }
    case ThresholdPolicy::Kind::bayes: {
      const double corr = bayes_threshold(policy.cost, beta, n);
      const double kb = kbar(beta);
      for (std::size_t k = 0; k < mu.size(); ++k) eta[k] = corr + kb / std::sqrt(mu[k]);
      break;
    }
    case ThresholdPolicy::Kind::reward_rate: {
      const double corr = reward_rate_threshold(policy.D, policy.Dp, policy.T_motor, beta, n);
      const double kb = kbar(beta);
      for (std::size_t k = 0; k < mu.size(); ++k) eta[k] = corr + kb / std::sqrt(mu[k]);
      break;
    }
  }
  return eta;
}

}  // namespace cddm
