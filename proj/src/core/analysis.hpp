#pragma once

namespace cddm {

// Expected decision time and error rate for the scalar process
// dx = beta dt + sigma dW decided at the first exit from (-eta, eta).
// beta = 0 returns the driftless limit (ET = eta^2/sigma^2, ER = 1/2).
struct DdmPerformance {
  double mean_time = 0.0;
  double error_rate = 0.0;
};
DdmPerformance ddm_performance(double beta, double sigma, double eta);

// integral_0^z e^{tau^2} dtau, power series; domain 0 <= z <= 6
double exp_square_integral(double z);

// integral_0^z e^{tau^2} (sqrt(pi)/2) erf(tau) dtau, power series; 0 <= z <= 6
double exp_square_erf_integral(double z);

// mean time for  de = -(mu/2) e dt + dW, e(0) = 0  to first reach +eta
double ou_mean_fpt(double mu, double eta);

// large-threshold exponential approximation of the first-passage density
double ou_fpt_density(double mu, double eta, double t);

struct Bracket {
  double low = 0.0;
  double high = 0.0;
};

// closed-form envelope for ou_mean_fpt; both ends grow like e^{eta^2 mu/2}
Bracket ou_mean_fpt_bounds(double mu, double eta);

// lower bound for the probability that the error process stays below
// K/sqrt(mu) throughout [0, t]; depends on mu only through the 2/mu time
// scale. Degenerates to the vacuous bound 0 for K below about 0.37, where
// the envelope's low end turns negative.
double ou_containment_lower(double K, double mu, double t);

// one-sided: stays below +K/sqrt(mu); two-sided: stays inside +-K/sqrt(mu)
// (may be negative; reported raw)
double ou_uniform_bound(double K, double mu, double t, bool two_sided);

// Threshold-crossing performance sandwich for the two-state reduction at a
// node with certainty index mu, obtained by pinning the error coordinate to
// +-K/sqrt(mu) and reading off the scalar formulas at the shifted thresholds.
struct PerformanceBounds {
  double et_low = 0.0;
  double et_high = 0.0;
  double er_low = 0.0;
  double er_high = 0.0;
  // two-sided containment bound evaluated at et_high (conservative plug-in
  // since the true mean decision time is unknown); only values > 0 inform
  double confidence = 0.0;
  double K = 0.0;
};
PerformanceBounds reduced_performance_bounds(double eta, double K, double mu, double beta,
                                             int n);

}  // namespace cddm
