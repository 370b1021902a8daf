#include "core/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "core/num_format.hpp"
#include "core/rng.hpp"

namespace cddm {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  require(n_ >= 2, Status::invalid_argument, "graph needs at least 2 nodes");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    require(e.u >= 0 && e.u < n_ && e.v >= 0 && e.v < n_, Status::invalid_edge,
            "edge endpoint out of range");
    require(e.u != e.v, Status::invalid_edge, "self-loop");
    require(std::isfinite(e.w) && e.w > 0.0, Status::invalid_edge, "edge weight must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
    require(seen.emplace(e.u, e.v).second, Status::invalid_edge, "duplicate edge");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });

  // connectivity by BFS
  std::vector<std::vector<int>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen_node(n_, 0);
  std::vector<int> queue{0};
  seen_node[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (int nb : adj[queue[i]])
      if (!seen_node[nb]) {
        seen_node[nb] = 1;
        queue.push_back(nb);
      }
  require(static_cast<int>(queue.size()) == n_, Status::disconnected_graph,
          "graph is not connected");
}

Graph Graph::erdos_renyi(int n, double p, std::uint64_t seed) {
  require(n >= 2, Status::invalid_argument, "erdos_renyi: n must be >= 2");
  require(std::isfinite(p) && p > 0.0 && p <= 1.0, Status::invalid_argument,
          "erdos_renyi: p must be in (0, 1]");
  std::uint64_t sm = seed;
  Xoshiro256 eng(splitmix64(sm) ^ 0xda3e39cb94b95bdbULL);
  constexpr int max_attempts = 1000;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double u = static_cast<double>(eng.next() >> 11) * 0x1.0p-53;
        if (u < p) edges.push_back({i, j, 1.0});
      }
    try {
      return Graph(n, std::move(edges));
    } catch (const Error& e) {
      if (e.status() != Status::disconnected_graph) throw;
    }
  }
  fail(Status::generation_failure,
       "erdos_renyi: no connected sample in " + std::to_string(max_attempts) + " attempts");
}

Graph Graph::paper9() {
  return Graph(9, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 3}, {2, 4}, {1, 5}, {2, 6}, {3, 7}, {4, 8}});
}

Graph Graph::from_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<Edge> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank or comment-only
    const std::string where = " (line " + std::to_string(lineno) + ")";
    if (n < 0) {
      require(tok == "n", Status::parse_error, "edge list must start with 'n <count>'" + where);
      require(static_cast<bool>(ls >> n), Status::parse_error, "bad node count" + where);
      std::string extra;
      require(!(ls >> extra), Status::parse_error, "trailing tokens after node count" + where);
      continue;
    }
    Edge e;
    std::istringstream es(tok);
    require(static_cast<bool>(es >> e.u) && es.eof(), Status::parse_error, "bad edge" + where);
    require(static_cast<bool>(ls >> e.v), Status::parse_error, "bad edge" + where);
    if (ls >> e.w) {
      std::string extra;
      require(!(ls >> extra), Status::parse_error, "trailing tokens on edge line" + where);
    } else {
      e.w = 1.0;
    }
    edges.push_back(e);
  }
  require(n >= 0, Status::parse_error, "empty edge list");
  return Graph(n, std::move(edges));
}

Graph Graph::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), Status::io_error, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_edge_list(ss.str());
}

std::string Graph::to_edge_list() const {
  std::string out = "n " + std::to_string(n_) + "\n";
  for (const auto& e : edges_) {
    out += std::to_string(e.u) + " " + std::to_string(e.v);
    if (e.w != 1.0) {
      out += " ";
      append_double(out, e.w);
    }
    out += "\n";
  }
  return out;
}

void Graph::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Status::io_error, "cannot open " + path + " for writing");
  f << to_edge_list();
  require(f.good(), Status::io_error, "write failed: " + path);
}

Eigen::MatrixXd Graph::laplacian() const {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& e : edges_) {
    L(e.u, e.u) += e.w;
    L(e.v, e.v) += e.w;
    L(e.u, e.v) -= e.w;
    L(e.v, e.u) -= e.w;
  }
  return L;
}

bool Graph::operator==(const Graph& other) const {
  if (n_ != other.n_ || edges_.size() != other.edges_.size()) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& a = edges_[i];
    const auto& b = other.edges_[i];
    if (a.u != b.u || a.v != b.v || a.w != b.w) return false;
  }
  return true;
}

Spectrum spectrum(const Graph& g) {
  const Eigen::MatrixXd L = g.laplacian();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L);
  require(solver.info() == Eigen::Success, Status::eigen_failure, "eigendecomposition failed");

  Spectrum s;
  s.lambda = solver.eigenvalues();
  s.U = solver.eigenvectors();
  const int n = g.n();
  const double scale = std::max(1.0, s.lambda(n - 1));

  require(std::abs(s.lambda(0)) <= 1e-8 * scale, Status::eigen_failure,
          "smallest Laplacian eigenvalue not at zero");
  s.lambda(0) = 0.0;
  require(s.lambda(1) > 1e-9 * scale, Status::eigen_failure,
          "Laplacian has a repeated zero eigenvalue");

  // sign convention: largest-magnitude entry of each eigenvector is positive
  for (int p = 0; p < n; ++p) {
    int arg = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(s.U(k, p)) > std::abs(s.U(arg, p))) arg = k;
    if (s.U(arg, p) < 0.0) s.U.col(p) = -s.U.col(p);
  }

  // snap the consensus eigenvector exactly
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  require((s.U.col(0).array() - inv_sqrt_n).abs().maxCoeff() <= 1e-6, Status::eigen_failure,
          "first eigenvector is not the consensus direction");
  s.U.col(0).setConstant(inv_sqrt_n);

  const double ortho = (s.U.transpose() * s.U - Eigen::MatrixXd::Identity(n, n))
                           .array()
                           .abs()
                           .maxCoeff();
  require(ortho <= 1e-10, Status::eigen_failure, "eigenvectors not orthonormal");
  const double recon =
      (s.U * s.lambda.asDiagonal() * s.U.transpose() - L).array().abs().maxCoeff();
  require(recon <= 1e-8 * scale, Status::eigen_failure, "spectral reconstruction failed");
  return s;
}

std::vector<double> certainty_indices(const Spectrum& s) {
  const int n = s.n();
  std::vector<double> mu(n);
  for (int k = 0; k < n; ++k) {
    double inv = 0.0;
    for (int p = 1; p < n; ++p) inv += s.U(k, p) * s.U(k, p) / (2.0 * s.lambda(p));
    mu[k] = 1.0 / inv;
  }
  return mu;
}

double certainty_index(const Spectrum& s, int k) {
  require(k >= 0 && k < s.n(), Status::invalid_argument, "node index out of range");
  double inv = 0.0;
  for (int p = 1; p < s.n(); ++p) inv += s.U(k, p) * s.U(k, p) / (2.0 * s.lambda(p));
  return 1.0 / inv;
}

}  // namespace cddm
