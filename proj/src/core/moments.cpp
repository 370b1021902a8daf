#include "core/moments.hpp"

#include <cmath>

namespace cddm {

namespace {

void check_times(const std::vector<double>& times) {
  require(!times.empty(), Status::invalid_argument, "need at least one time");
  for (double t : times)
    require(std::isfinite(t) && t >= 0.0, Status::invalid_argument, "times must be >= 0");
}

// Cov(t) = sum_p weight_p(t) u_p u_p^T for rate-lambda_p modes, evaluated
// spectrally; p starts at first_mode.
Eigen::MatrixXd mode_cov(const Spectrum& s, double t, double scale, double shift,
                         int first_mode) {
  const int n = s.n();
  Eigen::VectorXd w(n);
  w.setZero();
  for (int p = first_mode; p < n; ++p) {
    const double rate = s.lambda(p) + shift;
    w(p) = scale * (1.0 - std::exp(-2.0 * rate * t)) / (2.0 * rate);
  }
  return s.U * w.asDiagonal() * s.U.transpose();
}

}  // namespace

MomentCurve coupled_ddm_moments(const Spectrum& s, double beta, double sigma,
                                const std::vector<double>& times) {
  require(std::isfinite(beta), Status::invalid_argument, "beta must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, Status::invalid_argument, "sigma must be positive");
  check_times(times);
  const int n = s.n();
  const double s2 = sigma * sigma;
  MomentCurve c;
  c.times = times;
  for (double t : times) {
    c.mean.push_back(Eigen::VectorXd::Constant(n, beta * t));
    Eigen::MatrixXd cov = mode_cov(s, t, s2, 0.0, 1);
    cov.array() += s2 * t / static_cast<double>(n);  // consensus mode grows linearly
    c.cov.push_back(std::move(cov));
  }
  return c;
}

MomentCurve error_moments(const Spectrum& s, const std::vector<double>& times) {
  check_times(times);
  MomentCurve c;
  c.times = times;
  for (double t : times) {
    c.mean.push_back(Eigen::VectorXd::Zero(s.n()));
    c.cov.push_back(mode_cov(s, t, 1.0, 0.0, 1));
  }
  return c;
}

MomentCurve coupled_ou_moments(const Spectrum& s, double beta, double theta,
                               const std::vector<double>& times) {
  require(std::isfinite(beta), Status::invalid_argument, "beta must be finite");
  require(std::isfinite(theta) && theta > 0.0, Status::invalid_argument, "theta must be positive");
  check_times(times);
  MomentCurve c;
  c.times = times;
  for (double t : times) {
    const double m = beta * (1.0 - std::exp(-theta * t)) / theta;
    c.mean.push_back(Eigen::VectorXd::Constant(s.n(), m));
    c.cov.push_back(mode_cov(s, t, 1.0, theta, 0));
  }
  return c;
}

double approx_error_correlation(const Spectrum& s, int k) {
  require(k >= 0 && k < s.n(), Status::invalid_argument, "node index out of range");
  const double mu_k = certainty_index(s, k);
  double acc = 0.0;
  for (int p = 1; p < s.n(); ++p)
    acc += s.U(k, p) * s.U(k, p) / (s.lambda(p) + mu_k / 2.0);
  return mu_k * acc;
}

}  // namespace cddm
