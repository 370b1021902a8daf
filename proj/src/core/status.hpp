#pragma once

#include <stdexcept>
#include <string>

namespace cddm {

// Error identities surfaced across the library. Values are stable: the C API
// exposes them verbatim and the CLI maps them onto exit codes.
enum class Status : int {
  ok = 0,
  invalid_argument = 1,
  invalid_edge = 2,
  disconnected_graph = 3,
  generation_failure = 4,
  eigen_failure = 5,
  domain_overflow = 6,
  no_root = 7,
  solver_divergence = 8,
  out_of_domain = 9,
  invalid_regime = 10,
  degenerate_er = 11,
  too_many_timeouts = 12,
  io_error = 13,
  parse_error = 14,
};

constexpr const char* status_name(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::invalid_argument: return "invalid_argument";
    case Status::invalid_edge: return "invalid_edge";
    case Status::disconnected_graph: return "disconnected_graph";
    case Status::generation_failure: return "generation_failure";
    case Status::eigen_failure: return "eigen_failure";
    case Status::domain_overflow: return "domain_overflow";
    case Status::no_root: return "no_root";
    case Status::solver_divergence: return "solver_divergence";
    case Status::out_of_domain: return "out_of_domain";
    case Status::invalid_regime: return "invalid_regime";
    case Status::degenerate_er: return "degenerate_er";
    case Status::too_many_timeouts: return "too_many_timeouts";
    case Status::io_error: return "io_error";
    case Status::parse_error: return "parse_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Status s, const std::string& what) : std::runtime_error(what), status_(s) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status s, const std::string& what) { throw Error(s, what); }

inline void require(bool cond, Status s, const std::string& what) {
  if (!cond) fail(s, what);
}

}  // namespace cddm
