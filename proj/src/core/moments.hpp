#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/graph.hpp"

namespace cddm {

// Exact Gaussian marginals of a process at a list of times.
struct MomentCurve {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;
};

// mean beta t 1; Cov_kj = sigma^2 t / n
//   + sigma^2 sum_{p>=2} (1 - e^{-2 lambda_p t}) / (2 lambda_p) u_k u_j
MomentCurve coupled_ddm_moments(const Spectrum& s, double beta, double sigma,
                                const std::vector<double>& times);

// mean 0; Cov = sum_{p>=2} (1 - e^{-2 lambda_p t}) / (2 lambda_p) u_p u_p^T
MomentCurve error_moments(const Spectrum& s, const std::vector<double>& times);

// mean beta (1 - e^{-theta t}) / theta; Cov sums over all modes with rates
// lambda_p + theta
MomentCurve coupled_ou_moments(const Spectrum& s, double beta, double theta,
                               const std::vector<double>& times);

// Steady-state correlation between node k's true consensus error and its
// one-dimensional surrogate driven by the same noise. Exact value via the
// Sylvester equation L X + X diag(mu/2) = I - (1/n) 1 1^T, which reduces to
//   corr_k = mu_k sum_{p>=2} (u_k^(p))^2 / (lambda_p + mu_k / 2).
double approx_error_correlation(const Spectrum& s, int k);

}  // namespace cddm
