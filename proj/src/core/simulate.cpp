#include "core/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <thread>
#include <utility>

#include "core/num_format.hpp"
#include "core/rng.hpp"
#include "core/status.hpp"

namespace cddm {

StoppingRule StoppingRule::none() { return {}; }

StoppingRule StoppingRule::symmetric(std::vector<int> nodes, std::vector<double> eta) {
  StoppingRule r;
  r.kind = Kind::symmetric;
  r.nodes = std::move(nodes);
  r.eta = std::move(eta);
  return r;
}

StoppingRule StoppingRule::symmetric(std::vector<int> nodes, double eta) {
  std::vector<double> e(nodes.size(), eta);
  return symmetric(std::move(nodes), std::move(e));
}

StoppingRule StoppingRule::upper(std::vector<int> nodes, double eta) {
  StoppingRule r;
  r.kind = Kind::upper;
  r.nodes = std::move(nodes);
  r.eta.assign(r.nodes.size(), eta);
  return r;
}

StoppingRule StoppingRule::race_margin(std::vector<int> nodes, double eta) {
  StoppingRule r;
  r.kind = Kind::race_margin;
  r.nodes = std::move(nodes);
  r.eta.assign(r.nodes.size(), eta);
  return r;
}

namespace {

// Euler step x' = M x + c + S z with M = I - A dt, c = b dt, S = B sqrt(dt).
struct Stepper {
  Eigen::MatrixXd M;
  Eigen::MatrixXd S;
  Eigen::VectorXd c;
  Eigen::VectorXd s_diag;  // fast path when B is diagonal
  bool diagonal_noise = false;
};

Stepper make_stepper(const ModelSpec& m, double dt) {
  const int d = m.dim();
  Stepper st;
  st.M = Eigen::MatrixXd::Identity(d, d) - m.A * dt;
  st.c = m.b * dt;
  st.S = m.B * std::sqrt(dt);
  if (m.B.rows() == m.B.cols()) {
    st.diagonal_noise = true;
    for (int i = 0; i < d && st.diagonal_noise; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j && m.B(i, j) != 0.0) {
          st.diagonal_noise = false;
          break;
        }
    if (st.diagonal_noise) st.s_diag = st.S.diagonal();
  }
  return st;
}

struct Watch {
  int node = 0;
  int coord = 0;
  double eta = 0.0;
  double sigma2 = 0.0;  // (B B^T)_cc, bridge correction only
};

struct SimContext {
  const ModelSpec* model = nullptr;
  StoppingRule rule;
  SimParams p;
  Stepper st;
  int raw_dim = 0;
  std::vector<int> channel;  // empty means identity
  std::vector<Watch> watches;
  std::int64_t max_steps = 0;

  int outcomes_per_trial() const {
    return rule.kind == StoppingRule::Kind::none ? 1
                                                 : static_cast<int>(watches.size());
  }
};

void validate_params(const SimParams& p) {
  require(std::isfinite(p.dt) && p.dt > 0.0, Status::invalid_argument, "dt must be positive");
  require(std::isfinite(p.max_t) && p.max_t >= p.dt, Status::invalid_argument,
          "max_t must cover at least one step");
  require(p.trials >= 1, Status::invalid_argument, "trials must be >= 1");
}

SimContext make_context(const ModelSpec& m, const StoppingRule& rule, const SimParams& p,
                        const NoiseLayout& layout) {
  m.validate();
  validate_params(p);
  SimContext ctx;
  ctx.model = &m;
  ctx.rule = rule;
  ctx.p = p;
  ctx.st = make_stepper(m, p.dt);
  ctx.max_steps = std::max<std::int64_t>(1, std::llround(p.max_t / p.dt));

  if (layout.raw_dim == 0 && layout.channel.empty()) {
    ctx.raw_dim = m.noise_dim();
  } else {
    require(layout.raw_dim >= m.noise_dim(), Status::invalid_argument,
            "noise layout narrower than the model");
    require(static_cast<int>(layout.channel.size()) == m.noise_dim(), Status::invalid_argument,
            "noise layout needs one channel per model noise coordinate");
    for (int c : layout.channel)
      require(c >= 0 && c < layout.raw_dim, Status::invalid_argument,
              "noise channel out of range");
    ctx.raw_dim = layout.raw_dim;
    ctx.channel = layout.channel;
  }

  if (rule.kind != StoppingRule::Kind::none) {
    require(!rule.nodes.empty(), Status::invalid_argument, "stopping rule watches no node");
    require(rule.nodes.size() == rule.eta.size(), Status::invalid_argument,
            "one threshold per watched node required");
    std::set<int> seen;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      require(seen.insert(rule.nodes[i]).second, Status::invalid_argument,
              "node watched twice");
      require(std::isfinite(rule.eta[i]) && rule.eta[i] > 0.0, Status::invalid_argument,
              "threshold must be positive");
      Watch w;
      w.node = rule.nodes[i];
      w.coord = m.node_coordinate(rule.nodes[i]);
      w.eta = rule.eta[i];
      w.sigma2 = ctx.st.S.row(w.coord).squaredNorm() / p.dt;
      ctx.watches.push_back(w);
    }
  }
  if (rule.kind == StoppingRule::Kind::race_margin) {
    require(m.alternatives >= 2, Status::invalid_regime,
            "margin rule needs a race model with at least two alternatives");
    require(p.crossing == CrossingMode::grid, Status::invalid_regime,
            "bridge crossing supports threshold rules only");
  } else if (p.crossing == CrossingMode::bridge) {
    for (const Watch& w : ctx.watches)
      require(w.sigma2 > 0.0, Status::invalid_argument,
              "bridge crossing needs noise on every watched coordinate");
  }
  return ctx;
}

// Worker state reused across trials of one thread.
struct Scratch {
  Eigen::VectorXd x, xn, z;
  std::vector<double> raw;
  std::vector<double> prev;     // per watch, value before the step
  std::vector<bool> done;

  explicit Scratch(const SimContext& ctx)
      : x(ctx.model->dim()),
        xn(ctx.model->dim()),
        z(ctx.model->noise_dim()),
        raw(ctx.channel.empty() ? 0 : ctx.raw_dim),
        prev(ctx.watches.size(), 0.0),
        done(ctx.watches.size(), false) {}
};

inline void advance(const SimContext& ctx, Scratch& s, NoiseStream& ns) {
  if (ctx.channel.empty()) {
    ns.fill_gaussian(s.z.data(), static_cast<int>(s.z.size()));
  } else {
    ns.fill_gaussian(s.raw.data(), ctx.raw_dim);
    for (std::size_t c = 0; c < ctx.channel.size(); ++c) s.z[c] = s.raw[ctx.channel[c]];
  }
  s.xn.noalias() = ctx.st.M * s.x;
  s.xn += ctx.st.c;
  if (ctx.st.diagonal_noise)
    s.xn.array() += ctx.st.s_diag.array() * s.z.array();
  else
    s.xn.noalias() += ctx.st.S * s.z;
  s.x.swap(s.xn);
}

// decision for watch w at the end of a step, or -1 to keep going
inline int check_watch(const SimContext& ctx, Scratch& s, NoiseStream& ns, std::size_t wi) {
  const Watch& w = ctx.watches[wi];
  const double v = s.x[w.coord];
  const bool bridge = ctx.p.crossing == CrossingMode::bridge;
  // the uniform is consumed whenever the watch is active so that the stream
  // position never depends on the path
  const double u = bridge ? ns.uniform() : 0.0;

  switch (ctx.rule.kind) {
    case StoppingRule::Kind::symmetric: {
      if (v >= w.eta) return 1;
      if (v <= -w.eta) return 0;
      if (bridge) {
        const double inv = 2.0 / (w.sigma2 * ctx.p.dt);
        const double eu = -(w.eta - s.prev[wi]) * (w.eta - v) * inv;
        if (eu > -40.0 && u < std::exp(eu)) return 1;
        const double el = -(w.eta + s.prev[wi]) * (w.eta + v) * inv;
        if (el > -40.0 && u > 1.0 - std::exp(el)) return 0;
      }
      return -1;
    }
    case StoppingRule::Kind::upper: {
      if (v >= w.eta) return 1;
      if (bridge) {
        const double eu = -2.0 * (w.eta - s.prev[wi]) * (w.eta - v) / (w.sigma2 * ctx.p.dt);
        if (eu > -40.0 && u < std::exp(eu)) return 1;
      }
      return -1;
    }
    case StoppingRule::Kind::race_margin: {
      const int m = ctx.model->alternatives;
      int best = 0;
      double top = s.x[w.coord], second = -std::numeric_limits<double>::infinity();
      for (int a = 1; a < m; ++a) {
        const double va = s.x[w.coord + a];
        if (va > top) {
          second = top;
          top = va;
          best = a;
        } else if (va > second) {
          second = va;
        }
      }
      return top - second >= w.eta ? best : -1;
    }
    default: return -1;
  }
}

void run_trial_into(const SimContext& ctx, Scratch& s, std::int64_t trial, TrialOutcome* out) {
  NoiseStream ns(ctx.p.seed, static_cast<std::uint64_t>(trial));
  s.x.setZero();
  const std::size_t nw = ctx.watches.size();
  std::fill(s.done.begin(), s.done.end(), false);
  std::fill(s.prev.begin(), s.prev.end(), 0.0);

  if (ctx.rule.kind == StoppingRule::Kind::none) {
    for (std::int64_t step = 0; step < ctx.max_steps; ++step) advance(ctx, s, ns);
    out[0] = TrialOutcome{trial, -1, -1, static_cast<double>(ctx.max_steps) * ctx.p.dt,
                          ctx.max_steps};
    return;
  }

  std::size_t open = nw;
  for (std::int64_t step = 1; step <= ctx.max_steps && open > 0; ++step) {
    advance(ctx, s, ns);
    for (std::size_t wi = 0; wi < nw; ++wi) {
      if (s.done[wi]) continue;
      const int dec = check_watch(ctx, s, ns, wi);
      if (dec >= 0) {
        s.done[wi] = true;
        --open;
        out[wi] = TrialOutcome{trial, ctx.watches[wi].node, dec,
                               static_cast<double>(step) * ctx.p.dt, step};
      } else {
        s.prev[wi] = s.x[ctx.watches[wi].coord];
      }
    }
  }
  for (std::size_t wi = 0; wi < nw; ++wi)
    if (!s.done[wi])
      out[wi] = TrialOutcome{trial, ctx.watches[wi].node, -1,
                             static_cast<double>(ctx.max_steps) * ctx.p.dt, ctx.max_steps};
}

void for_each_trial(const SimContext& ctx, const std::function<void(std::int64_t, Scratch&)>& body) {
  const int threads = std::min<std::int64_t>(std::max(1, ctx.p.threads), ctx.p.trials);
  if (threads <= 1) {
    Scratch s(ctx);
    for (std::int64_t t = 0; t < ctx.p.trials; ++t) body(t, s);
    return;
  }
  std::atomic<std::int64_t> next{0};
  const std::int64_t block = 64;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) {
    pool.emplace_back([&] {
      Scratch s(ctx);
      for (;;) {
        const std::int64_t lo = next.fetch_add(block);
        if (lo >= ctx.p.trials) return;
        const std::int64_t hi = std::min(lo + block, ctx.p.trials);
        for (std::int64_t t = lo; t < hi; ++t) body(t, s);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace

std::vector<TrialOutcome> run_trial(const ModelSpec& m, const StoppingRule& rule,
                                    const SimParams& p, std::int64_t trial,
                                    const NoiseLayout& layout) {
  SimContext ctx = make_context(m, rule, p, layout);
  Scratch s(ctx);
  std::vector<TrialOutcome> out(ctx.outcomes_per_trial());
  run_trial_into(ctx, s, trial, out.data());
  return out;
}

std::vector<TrialOutcome> run_ensemble(const ModelSpec& m, const StoppingRule& rule,
                                       const SimParams& p, const NoiseLayout& layout) {
  SimContext ctx = make_context(m, rule, p, layout);
  const int per = ctx.outcomes_per_trial();
  std::vector<TrialOutcome> out(static_cast<std::size_t>(p.trials) * per);
  for_each_trial(ctx, [&](std::int64_t t, Scratch& s) {
    run_trial_into(ctx, s, t, out.data() + t * per);
  });
  return out;
}

Eigen::MatrixXd simulate_path(const ModelSpec& m, double dt, int steps, std::uint64_t seed,
                              std::int64_t trial, const NoiseLayout& layout) {
  require(steps >= 1, Status::invalid_argument, "steps must be >= 1");
  SimParams p;
  p.dt = dt;
  p.max_t = dt * steps;
  p.seed = seed;
  SimContext ctx = make_context(m, StoppingRule::none(), p, layout);
  Scratch s(ctx);
  NoiseStream ns(seed, static_cast<std::uint64_t>(trial));
  s.x.setZero();
  Eigen::MatrixXd path(steps + 1, m.dim());
  path.row(0).setZero();
  for (int step = 1; step <= steps; ++step) {
    advance(ctx, s, ns);
    path.row(step) = s.x.transpose();
  }
  return path;
}

MomentCurve estimate_moments(const ModelSpec& m, const std::vector<double>& times,
                             const SimParams& p) {
  require(!times.empty(), Status::invalid_argument, "no times requested");
  SimContext ctx = make_context(m, StoppingRule::none(), p, {});
  const int d = m.dim();

  // snapshots on the step grid, in step order
  std::vector<std::pair<std::int64_t, int>> snaps;  // (step index, slot)
  std::int64_t last = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(std::isfinite(times[i]) && times[i] >= 0.0, Status::invalid_argument,
            "times must be nonnegative");
    const std::int64_t idx = std::llround(times[i] / p.dt);
    snaps.emplace_back(idx, static_cast<int>(i));
    last = std::max(last, idx);
  }
  std::sort(snaps.begin(), snaps.end());
  const int nt = static_cast<int>(times.size());

  struct Acc {
    std::vector<Eigen::VectorXd> s1;
    std::vector<Eigen::MatrixXd> s2;
    void init(int nt_, int d_) {
      s1.assign(nt_, Eigen::VectorXd::Zero(d_));
      s2.assign(nt_, Eigen::MatrixXd::Zero(d_, d_));
    }
  };

  // fixed-size chunks merged in chunk order keep the reduction deterministic
  // for any thread count
  const std::int64_t chunk = 1024;
  const std::int64_t nchunks = (p.trials + chunk - 1) / chunk;
  std::vector<Acc> parts(nchunks);

  const int threads =
      static_cast<int>(std::min<std::int64_t>(std::max(1, p.threads), nchunks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    Scratch s(ctx);
    for (;;) {
      const std::int64_t ci = next.fetch_add(1);
      if (ci >= nchunks) return;
      Acc& acc = parts[ci];
      acc.init(nt, d);
      const std::int64_t lo = ci * chunk, hi = std::min(lo + chunk, p.trials);
      for (std::int64_t t = lo; t < hi; ++t) {
        NoiseStream ns(p.seed, static_cast<std::uint64_t>(t));
        s.x.setZero();
        std::size_t si = 0;
        for (std::int64_t step = 0; step <= last; ++step) {
          if (step > 0) advance(ctx, s, ns);
          while (si < snaps.size() && snaps[si].first == step) {
            const int slot = snaps[si].second;
            acc.s1[slot] += s.x;
            acc.s2[slot].noalias() += s.x * s.x.transpose();
            ++si;
          }
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  Acc total;
  total.init(nt, d);
  for (const Acc& a : parts)
    for (int i = 0; i < nt; ++i) {
      total.s1[i] += a.s1[i];
      total.s2[i] += a.s2[i];
    }

  MomentCurve out;
  out.times.resize(nt);
  out.mean.resize(nt);
  out.cov.resize(nt);
  const double n = static_cast<double>(p.trials);
  for (auto& [idx, slot] : snaps) out.times[slot] = static_cast<double>(idx) * p.dt;
  for (int i = 0; i < nt; ++i) {
    out.mean[i] = total.s1[i] / n;
    if (p.trials > 1)
      out.cov[i] = (total.s2[i] - n * out.mean[i] * out.mean[i].transpose()) / (n - 1.0);
    else
      out.cov[i] = Eigen::MatrixXd::Zero(d, d);
  }
  return out;
}

std::string outcomes_to_csv(const std::vector<TrialOutcome>& outcomes) {
  std::string s = "trial,node,decision,decision_time,steps\n";
  for (const TrialOutcome& o : outcomes) {
    s += std::to_string(o.trial);
    s += ',';
    s += std::to_string(o.node);
    s += ',';
    s += std::to_string(o.decision);
    s += ',';
    append_double(s, o.time);
    s += ',';
    s += std::to_string(o.steps);
    s += '\n';
  }
  return s;
}

void write_outcomes_csv(const std::vector<TrialOutcome>& outcomes, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Status::io_error, "cannot open " + path);
  f << outcomes_to_csv(outcomes);
  require(f.good(), Status::io_error, "write failed for " + path);
}

}  // namespace cddm
