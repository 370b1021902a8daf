#include "core/analysis.hpp"

#include <cmath>

#include "core/status.hpp"

namespace cddm {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kZMax = 6.0;

double series_domain(double z) {
  require(std::isfinite(z) && z >= 0.0, Status::invalid_argument, "argument must be >= 0");
  require(z <= kZMax, Status::domain_overflow, "argument above series domain (z <= 6)");
  return z;
}

}  // namespace

DdmPerformance ddm_performance(double beta, double sigma, double eta) {
  require(std::isfinite(sigma) && sigma > 0.0, Status::invalid_argument,
          "diffusion must be positive");
  require(std::isfinite(eta) && eta >= 0.0, Status::invalid_argument,
          "threshold must be nonnegative");
  require(std::isfinite(beta), Status::invalid_argument, "drift must be finite");
  const double s2 = sigma * sigma;
  const double x = beta * eta / s2;
  DdmPerformance p;
  // (eta/beta) tanh(x) = (eta^2/s2) tanh(x)/x, continuous through beta = 0
  p.mean_time = eta * eta / s2 * (x == 0.0 ? 1.0 : std::tanh(x) / x);
  p.error_rate = x >= 0.0 ? std::exp(-2.0 * x) / (1.0 + std::exp(-2.0 * x))
                          : 1.0 / (1.0 + std::exp(2.0 * x));
  return p;
}

double exp_square_integral(double z) {
  series_domain(z);
  // sum_k z^{2k+1} / ((2k+1) k!)
  const double z2 = z * z;
  double term = z, sum = z;
  for (int k = 0; k < 400; ++k) {
    term *= z2 * (2 * k + 1) / (static_cast<double>(2 * k + 3) * (k + 1));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double exp_square_erf_integral(double z) {
  series_domain(z);
  // e^{x^2} erf(x) = (2/sqrt(pi)) sum_k 2^k x^{2k+1} / (2k+1)!!, termwise
  // integration gives sum_k 2^k z^{2k+2} / ((2k+2)(2k+1)!!); all terms
  // positive, no cancellation
  const double z2 = z * z;
  double term = 0.5 * z2, sum = term;
  for (int k = 0; k < 400; ++k) {
    term *= 2.0 * z2 * (k + 1) / (static_cast<double>(k + 2) * (2 * k + 3));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double ou_mean_fpt(double mu, double eta) {
  require(std::isfinite(mu) && mu > 0.0, Status::invalid_argument, "mu must be positive");
  require(std::isfinite(eta) && eta > 0.0, Status::invalid_argument,
          "threshold must be positive");
  // T(0) = 2 int_0^eta e^{q y^2} int_{-inf}^y e^{-q s^2} ds dy with q = mu/2
  // (exit-time ODE T''/2 - q y T' = -1, T(eta) = 0, natural boundary below),
  // which the substitution u = y sqrt(q) turns into the two series at z.
  const double z = eta * std::sqrt(0.5 * mu);
  return 2.0 / mu * (kSqrtPi * exp_square_integral(z) + 2.0 * exp_square_erf_integral(z));
}

double ou_fpt_density(double mu, double eta, double t) {
  require(std::isfinite(t) && t >= 0.0, Status::invalid_argument, "time must be >= 0");
  const double mean = ou_mean_fpt(mu, eta);
  return std::exp(-t / mean) / mean;
}

Bracket ou_mean_fpt_bounds(double mu, double eta) {
  require(std::isfinite(mu) && mu > 0.0, Status::invalid_argument, "mu must be positive");
  require(std::isfinite(eta) && eta > 0.0, Status::invalid_argument,
          "threshold must be positive");
  const double w = std::exp(0.5 * eta * eta * mu);  // may overflow to inf, by design
  Bracket b;
  b.high = 3.0 * kSqrtPi * eta / std::sqrt(2.0 * mu) * w;
  b.low = 2.0 / mu *
          (kSqrtPi * (w - 1.0) / (std::sqrt(2.0) * eta * std::sqrt(mu)) +
           (w - 1.0) / (2.0 * eta * eta * mu) - 0.5);
  return b;
}

double ou_containment_lower(double K, double mu, double t) {
  require(std::isfinite(K) && K > 0.0, Status::invalid_argument, "K must be positive");
  require(std::isfinite(mu) && mu > 0.0, Status::invalid_argument, "mu must be positive");
  require(std::isfinite(t) && t >= 0.0, Status::invalid_argument, "time must be >= 0");
  if (t == 0.0) return 1.0;
  const double low = ou_mean_fpt_bounds(mu, K / std::sqrt(mu)).low;
  if (low <= 0.0) return 0.0;
  return std::exp(-t / low);
}

double ou_uniform_bound(double K, double mu, double t, bool two_sided) {
  const double p = ou_containment_lower(K, mu, t);
  return two_sided ? 2.0 * p - 1.0 : p;
}

PerformanceBounds reduced_performance_bounds(double eta, double K, double mu, double beta,
                                             int n) {
  require(n >= 1, Status::invalid_argument, "n must be >= 1");
  require(std::isfinite(beta) && beta > 0.0, Status::invalid_argument,
          "drift must be positive");
  require(std::isfinite(mu) && mu > 0.0, Status::invalid_argument, "mu must be positive");
  require(std::isfinite(K) && K >= 0.0, Status::invalid_argument, "K must be >= 0");
  require(std::isfinite(eta) && eta > 0.0, Status::invalid_argument,
          "threshold must be positive");
  const double shift = K / std::sqrt(mu);
  require(eta > shift, Status::invalid_regime,
          "threshold not above the error band K/sqrt(mu)");
  const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  const DdmPerformance tight = ddm_performance(beta, sigma, eta - shift);
  const DdmPerformance wide = ddm_performance(beta, sigma, eta + shift);
  PerformanceBounds b;
  b.et_low = tight.mean_time;
  b.et_high = wide.mean_time;
  b.er_low = wide.error_rate;
  b.er_high = tight.error_rate;
  b.confidence = K > 0.0 ? ou_uniform_bound(K, mu, b.et_high, true) : -1.0;
  b.K = K;
  return b;
}

}  // namespace cddm
