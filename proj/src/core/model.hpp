#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/graph.hpp"

namespace cddm {

enum class ModelKind {
  coupled_ddm,
  centralized_ddm,
  error_dynamics,
  reduced_ddm,
  coupled_ou,
  reduced_ou,
  coupled_race,
  custom,
};

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);

// Affine-linear SDE  dx = (b - A x) dt + B dW  with per-coordinate labels.
// All concrete processes in this library are instances of this one form, so
// the simulator and the serialization code have a single target.
struct ModelSpec {
  ModelKind kind = ModelKind::custom;
  Eigen::MatrixXd A;  // dim x dim
  Eigen::VectorXd b;  // dim
  Eigen::MatrixXd B;  // dim x noise_dim
  std::vector<std::string> labels;
  int nodes = 0;         // number of network nodes represented
  int alternatives = 1;  // m > 1 only for race models

  int dim() const { return static_cast<int>(b.size()); }
  int noise_dim() const { return static_cast<int>(B.cols()); }

  // coordinate carrying node k's evidence; for race models the first
  // coordinate of node k's block (block is contiguous, node-major)
  int node_coordinate(int node) const;

  void validate() const;

  std::string to_json() const;
  static ModelSpec from_json(const std::string& text);
};

// dx = (beta 1 - L x) dt + sigma dW
ModelSpec coupled_ddm(const Graph& g, double beta, double sigma);

// scalar reference process, diffusion 1/sqrt(n)
ModelSpec centralized_ddm(int n, double beta);

// de = -L e dt + (I - (1/n) 1 1^T) dW
ModelSpec error_dynamics(const Graph& g);

// 2-state (y, e): dy = (beta - mu/2 e) dt + (1/sqrt(n)) dW1 + dW2,
//                 de = -(mu/2) e dt + dW2
ModelSpec reduced_ddm(double mu_k, double beta, int n);

// dx = (beta 1 - (L + theta I) x) dt + dW
ModelSpec coupled_ou(const Graph& g, double beta, double theta);

// leaky reduction: dy = (beta - theta y + (theta - mu_hat/2) e) dt + ...,
//                  de = -(mu_hat/2) e dt + dW2
ModelSpec reduced_ou(double mu_hat_k, double beta, double theta, int n);

// m alternatives per node, coordinates node-major (node k's block at k*m):
// dx = (1_n kron beta - (L kron I_m) x) dt + sigma dW
ModelSpec coupled_race(const Graph& g, const std::vector<double>& beta, double sigma);

// leaky certainty index: 1/mu_hat_k = sum_{p>=2} (u_k^(p))^2 / (2 (lambda_p + theta));
// theta = 0 recovers the certainty index
double ou_certainty_index(const Spectrum& s, double theta, int k);
std::vector<double> ou_certainty_indices(const Spectrum& s, double theta);

}  // namespace cddm
