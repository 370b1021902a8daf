#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "core/status.hpp"

namespace cddm {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

// Connected undirected weighted graph. Edges are normalized to u < v and kept
// sorted, so the edge-list text form is canonical and round-trips byte for
// byte. Construction rejects self-loops, duplicates, bad endpoints and
// non-positive weights, and requires connectivity.
class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  static Graph erdos_renyi(int n, double p, std::uint64_t seed);

  // Bundled 9-node three-tier benchmark network ("paper9"): hub 0 joined to
  // middle nodes 1..4, middle diagonals (1,3) and (2,4), one pendant leaf per
  // middle node. Certainty indices are exactly {81/10, 81/19 x4, 162/101 x4}.
  static Graph paper9();

  static Graph from_edge_list(const std::string& text);
  static Graph load(const std::string& path);

  std::string to_edge_list() const;
  void save(const std::string& path) const;

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Eigen::MatrixXd laplacian() const;

  bool operator==(const Graph& other) const;

 private:
  int n_;
  std::vector<Edge> edges_;
};

// Laplacian eigendecomposition with the library's fixed conventions:
// eigenvalues ascending with lambda[0] snapped to 0, eigenvector columns
// orthonormal with the largest-magnitude entry positive, and column 0 snapped
// to 1/sqrt(n). Construction verifies orthonormality and reconstruction.
struct Spectrum {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd U;  // U(k, p) = entry k of eigenvector p

  int n() const { return static_cast<int>(lambda.size()); }
};

Spectrum spectrum(const Graph& g);

// Node certainty index mu_k: 1/mu_k = sum_{p>=2} (u_k^(p))^2 / (2 lambda_p).
// Satisfies sum_k 1/mu_k = sum_{p>=2} 1/(2 lambda_p) and
// mu_k >= 2 n lambda_2 / (n-1).
std::vector<double> certainty_indices(const Spectrum& s);
double certainty_index(const Spectrum& s, int k);

}  // namespace cddm
