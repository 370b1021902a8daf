#include "core/model.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

namespace cddm {

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::coupled_ddm: return "coupled-ddm";
    case ModelKind::centralized_ddm: return "centralized-ddm";
    case ModelKind::error_dynamics: return "error-dynamics";
    case ModelKind::reduced_ddm: return "reduced-ddm";
    case ModelKind::coupled_ou: return "coupled-ou";
    case ModelKind::reduced_ou: return "reduced-ou";
    case ModelKind::coupled_race: return "coupled-race";
    case ModelKind::custom: return "custom";
  }
  return "custom";
}

ModelKind model_kind_from_name(const std::string& name) {
  for (ModelKind k : {ModelKind::coupled_ddm, ModelKind::centralized_ddm,
                      ModelKind::error_dynamics, ModelKind::reduced_ddm, ModelKind::coupled_ou,
                      ModelKind::reduced_ou, ModelKind::coupled_race, ModelKind::custom})
    if (name == model_kind_name(k)) return k;
  fail(Status::parse_error, "unknown model kind: " + name);
}

int ModelSpec::node_coordinate(int node) const {
  require(node >= 0 && node < std::max(nodes, 1), Status::invalid_argument,
          "node index out of range");
  switch (kind) {
    case ModelKind::coupled_race: return node * alternatives;
    case ModelKind::centralized_ddm:
    case ModelKind::reduced_ddm:
    case ModelKind::reduced_ou: return 0;
    default: return node;
  }
}

void ModelSpec::validate() const {
  const int d = dim();
  require(d >= 1, Status::invalid_argument, "model needs at least one coordinate");
  require(A.rows() == d && A.cols() == d, Status::invalid_argument, "drift matrix shape mismatch");
  require(B.rows() == d && B.cols() >= 1, Status::invalid_argument,
          "diffusion matrix shape mismatch");
  require(static_cast<int>(labels.size()) == d, Status::invalid_argument,
          "one label per coordinate required");
  require(alternatives >= 1, Status::invalid_argument, "alternatives must be >= 1");
  require(A.allFinite() && b.allFinite() && B.allFinite(), Status::invalid_argument,
          "model coefficients must be finite");
  // a noiseless coordinate breaks the crossing corrections downstream
  require(B.rowwise().norm().minCoeff() > 0.0, Status::invalid_argument,
          "every coordinate needs a noise channel");
}

namespace {

std::vector<std::string> node_labels(const char* prefix, int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(std::string(prefix) + ":" + std::to_string(k));
  return out;
}

}  // namespace

ModelSpec coupled_ddm(const Graph& g, double beta, double sigma) {
  require(std::isfinite(beta), Status::invalid_argument, "beta must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, Status::invalid_argument, "sigma must be positive");
  ModelSpec m;
  m.kind = ModelKind::coupled_ddm;
  m.nodes = g.n();
  m.A = g.laplacian();
  m.b = Eigen::VectorXd::Constant(g.n(), beta);
  m.B = sigma * Eigen::MatrixXd::Identity(g.n(), g.n());
  m.labels = node_labels("evidence", g.n());
  return m;
}

ModelSpec centralized_ddm(int n, double beta) {
  require(n >= 1, Status::invalid_argument, "n must be >= 1");
  require(std::isfinite(beta), Status::invalid_argument, "beta must be finite");
  ModelSpec m;
  m.kind = ModelKind::centralized_ddm;
  m.nodes = n;
  m.A = Eigen::MatrixXd::Zero(1, 1);
  m.b = Eigen::VectorXd::Constant(1, beta);
  m.B = Eigen::MatrixXd::Constant(1, 1, 1.0 / std::sqrt(static_cast<double>(n)));
  m.labels = {"centralized-evidence"};
  return m;
}

ModelSpec error_dynamics(const Graph& g) {
  const int n = g.n();
  ModelSpec m;
  m.kind = ModelKind::error_dynamics;
  m.nodes = n;
  m.A = g.laplacian();
  m.b = Eigen::VectorXd::Zero(n);
  m.B = Eigen::MatrixXd::Identity(n, n) -
        Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  m.labels = node_labels("error", n);
  return m;
}

ModelSpec reduced_ddm(double mu_k, double beta, int n) {
  require(std::isfinite(mu_k) && mu_k > 0.0, Status::invalid_argument, "mu must be positive");
  require(std::isfinite(beta), Status::invalid_argument, "beta must be finite");
  require(n >= 1, Status::invalid_argument, "n must be >= 1");
  ModelSpec m;
  m.kind = ModelKind::reduced_ddm;
  m.nodes = n;
  m.A.setZero(2, 2);
  m.A(0, 1) = mu_k / 2.0;
  m.A(1, 1) = mu_k / 2.0;
  m.b = Eigen::Vector2d(beta, 0.0);
  m.B.setZero(2, 2);
  m.B(0, 0) = 1.0 / std::sqrt(static_cast<double>(n));
  m.B(0, 1) = 1.0;
  m.B(1, 1) = 1.0;
  m.labels = {"evidence", "error"};
  return m;
}

ModelSpec coupled_ou(const Graph& g, double beta, double theta) {
  require(std::isfinite(beta), Status::invalid_argument, "beta must be finite");
  require(std::isfinite(theta) && theta > 0.0, Status::invalid_argument, "theta must be positive");
  ModelSpec m = coupled_ddm(g, beta, 1.0);
  m.kind = ModelKind::coupled_ou;
  m.A += theta * Eigen::MatrixXd::Identity(g.n(), g.n());
  return m;
}

ModelSpec reduced_ou(double mu_hat_k, double beta, double theta, int n) {
  require(std::isfinite(mu_hat_k) && mu_hat_k > 0.0, Status::invalid_argument,
          "mu_hat must be positive");
  require(std::isfinite(theta) && theta > 0.0, Status::invalid_argument, "theta must be positive");
  ModelSpec m = reduced_ddm(mu_hat_k, beta, n);
  m.kind = ModelKind::reduced_ou;
  m.A(0, 0) = theta;
  m.A(0, 1) = mu_hat_k / 2.0 - theta;
  return m;
}

ModelSpec coupled_race(const Graph& g, const std::vector<double>& beta, double sigma) {
  const int n = g.n();
  const int m_alt = static_cast<int>(beta.size());
  require(m_alt >= 2, Status::invalid_argument, "race needs at least 2 alternatives");
  require(std::isfinite(sigma) && sigma > 0.0, Status::invalid_argument, "sigma must be positive");
  for (double bk : beta)
    require(std::isfinite(bk), Status::invalid_argument, "race drifts must be finite");

  const int d = n * m_alt;
  const Eigen::MatrixXd L = g.laplacian();
  ModelSpec m;
  m.kind = ModelKind::coupled_race;
  m.nodes = n;
  m.alternatives = m_alt;
  m.A = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      if (L(k, j) != 0.0)
        for (int a = 0; a < m_alt; ++a) m.A(k * m_alt + a, j * m_alt + a) = L(k, j);
  m.b.resize(d);
  m.labels.resize(d);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < m_alt; ++a) {
      m.b(k * m_alt + a) = beta[a];
      m.labels[k * m_alt + a] =
          "evidence:" + std::to_string(k) + ":" + std::to_string(a);
    }
  m.B = sigma * Eigen::MatrixXd::Identity(d, d);
  return m;
}

double ou_certainty_index(const Spectrum& s, double theta, int k) {
  require(k >= 0 && k < s.n(), Status::invalid_argument, "node index out of range");
  require(std::isfinite(theta) && theta >= 0.0, Status::invalid_argument,
          "theta must be >= 0");
  double inv = 0.0;
  for (int p = 1; p < s.n(); ++p)
    inv += s.U(k, p) * s.U(k, p) / (2.0 * (s.lambda(p) + theta));
  return 1.0 / inv;
}

std::vector<double> ou_certainty_indices(const Spectrum& s, double theta) {
  std::vector<double> out(s.n());
  for (int k = 0; k < s.n(); ++k) out[k] = ou_certainty_index(s, theta, k);
  return out;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* what) {
  require(j.is_array() && !j.empty(), Status::parse_error, std::string(what) + ": expected rows");
  const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
  require(cols > 0, Status::parse_error, std::string(what) + ": expected row arrays");
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j.at(i).is_array() && j.at(i).size() == cols, Status::parse_error,
            std::string(what) + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      require(j.at(i).at(c).is_number(), Status::parse_error,
              std::string(what) + ": non-numeric entry");
      m(i, c) = j.at(i).at(c).get<double>();
    }
  }
  return m;
}

}  // namespace

std::string ModelSpec::to_json() const {
  validate();
  nlohmann::json j;
  j["kind"] = model_kind_name(kind);
  j["nodes"] = nodes;
  j["alternatives"] = alternatives;
  j["drift_matrix"] = matrix_to_json(A);
  j["drift_offset"] = std::vector<double>(b.data(), b.data() + b.size());
  j["diffusion_matrix"] = matrix_to_json(B);
  j["labels"] = labels;
  return j.dump(2);
}

ModelSpec ModelSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Status::parse_error, std::string("model json: ") + e.what());
  }
  require(j.is_object(), Status::parse_error, "model json: expected an object");
  static const std::set<std::string> known = {"kind",         "nodes",        "alternatives",
                                              "drift_matrix", "drift_offset", "diffusion_matrix",
                                              "labels"};
  for (auto it = j.begin(); it != j.end(); ++it)
    require(known.count(it.key()) > 0, Status::parse_error,
            "model json: unknown key '" + it.key() + "'");
  for (const auto& key : known)
    require(j.contains(key), Status::parse_error, "model json: missing key '" + key + "'");

  ModelSpec m;
  require(j["kind"].is_string(), Status::parse_error, "model json: kind must be a string");
  m.kind = model_kind_from_name(j["kind"].get<std::string>());
  require(j["nodes"].is_number_integer(), Status::parse_error, "model json: bad nodes");
  m.nodes = j["nodes"].get<int>();
  require(j["alternatives"].is_number_integer(), Status::parse_error,
          "model json: bad alternatives");
  m.alternatives = j["alternatives"].get<int>();
  m.A = matrix_from_json(j["drift_matrix"], "drift_matrix");
  const Eigen::MatrixXd boff = matrix_from_json(nlohmann::json::array({j["drift_offset"]}),
                                                "drift_offset");
  m.b = boff.row(0).transpose();
  m.B = matrix_from_json(j["diffusion_matrix"], "diffusion_matrix");
  require(j["labels"].is_array(), Status::parse_error, "model json: labels must be an array");
  for (const auto& l : j["labels"]) {
    require(l.is_string(), Status::parse_error, "model json: labels must be strings");
    m.labels.push_back(l.get<std::string>());
  }
  m.validate();
  return m;
}

}  // namespace cddm
