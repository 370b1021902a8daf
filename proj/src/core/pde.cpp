#include "core/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "core/num_format.hpp"
#include "core/status.hpp"

namespace cddm {

double PdeSolution::at(double y, double eps) const {
  const PdeGrid& g = grid;
  const double sy = (g.y_hi - g.y_lo) * 1e-9, se = (g.e_hi - g.e_lo) * 1e-9;
  require(y >= g.y_lo - sy && y <= g.y_hi + sy && eps >= g.e_lo - se && eps <= g.e_hi + se,
          Status::out_of_domain, "query outside the solution domain");
  const double ty = std::clamp((y - g.y_lo) / g.hy(), 0.0, static_cast<double>(g.ny - 1));
  const double te = std::clamp((eps - g.e_lo) / g.he(), 0.0, static_cast<double>(g.ne - 1));
  const int i0 = std::min(static_cast<int>(ty), g.ny - 2);
  const int j0 = std::min(static_cast<int>(te), g.ne - 2);
  const double fy = ty - i0, fe = te - j0;
  return (1.0 - fy) * (1.0 - fe) * values(i0, j0) + fy * (1.0 - fe) * values(i0 + 1, j0) +
         (1.0 - fy) * fe * values(i0, j0 + 1) + fy * fe * values(i0 + 1, j0 + 1);
}

std::string PdeSolution::to_csv() const {
  std::string s = "y,eps,value\n";
  s.reserve(static_cast<std::size_t>(grid.ny) * grid.ne * 24 + 16);
  for (int i = 0; i < grid.ny; ++i)
    for (int j = 0; j < grid.ne; ++j) {
      append_double(s, grid.y(i));
      s += ',';
      append_double(s, grid.eps(j));
      s += ',';
      append_double(s, values(i, j));
      s += '\n';
    }
  return s;
}

void PdeSolution::write_csv(const std::string& path) const {
  const std::string s = to_csv();
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Status::io_error, "cannot open " + path);
  f << s;
  require(f.good(), Status::io_error, "write failed for " + path);
}

void PdeSolution::write_binary(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), Status::io_error, "cannot open " + path);
  f.write("RDDMPDE1", 8);
  const std::int32_t head[3] = {which == PdeField::mean_time ? 0 : 1,
                                static_cast<std::int32_t>(grid.ny),
                                static_cast<std::int32_t>(grid.ne)};
  f.write(reinterpret_cast<const char*>(head), sizeof(head));
  const double ranges[4] = {grid.y_lo, grid.y_hi, grid.e_lo, grid.e_hi};
  f.write(reinterpret_cast<const char*>(ranges), sizeof(ranges));
  std::vector<double> row(grid.ne);
  for (int i = 0; i < grid.ny; ++i) {
    for (int j = 0; j < grid.ne; ++j) row[j] = values(i, j);
    f.write(reinterpret_cast<const char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  require(f.good(), Status::io_error, "write failed for " + path);
}

PdeSolution PdeSolution::read_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), Status::io_error, "cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  require(f.good() && std::memcmp(magic, "RDDMPDE1", 8) == 0, Status::parse_error,
          "not a grid dump (bad magic)");
  std::int32_t head[3];
  f.read(reinterpret_cast<char*>(head), sizeof(head));
  double ranges[4];
  f.read(reinterpret_cast<char*>(ranges), sizeof(ranges));
  require(f.good(), Status::parse_error, "truncated grid dump header");
  require(head[0] == 0 || head[0] == 1, Status::parse_error, "unknown field code");
  require(head[1] >= 2 && head[2] >= 2 && head[1] < (1 << 16) && head[2] < (1 << 16),
          Status::parse_error, "implausible grid dimensions");
  require(ranges[1] > ranges[0] && ranges[3] > ranges[2], Status::parse_error,
          "degenerate grid ranges");
  PdeSolution sol;
  sol.which = head[0] == 0 ? PdeField::mean_time : PdeField::error_prob;
  sol.grid = {head[1], head[2], ranges[0], ranges[1], ranges[2], ranges[3]};
  sol.values.resize(sol.grid.ny, sol.grid.ne);
  std::vector<double> row(sol.grid.ne);
  for (int i = 0; i < sol.grid.ny; ++i) {
    f.read(reinterpret_cast<char*>(row.data()),
           static_cast<std::streamsize>(row.size() * sizeof(double)));
    require(f.good(), Status::parse_error, "truncated grid dump data");
    for (int j = 0; j < sol.grid.ne; ++j) sol.values(i, j) = row[j];
  }
  return sol;
}

namespace {

// per-eps-row weights of the negated generator; the system is
// diag*u_ij + wyp*u_{i+1,j} + wym*u_{i-1,j} + wep*u_{i,j+1} + wem*u_{i,j-1}
//   + q*(u_{i+1,j-1} + u_{i-1,j+1} - u_{i+1,j+1} - u_{i-1,j-1}) = f
struct RowCoef {
  double diag, wyp, wym, wep, wem;
};

// Advection is differenced centrally wherever the cell Peclet number allows
// (keeps the scheme second order where diffusion dominates, which is what the
// grid-refinement accuracy targets need) and upwinded where it does not, so
// the advection-dominated far-field rows stay monotone.
RowCoef make_row(double ay, double ae, double cyy, double cee, double hy, double he) {
  RowCoef r;
  r.diag = 2.0 * cyy / (hy * hy) + 2.0 * cee / (he * he);
  r.wyp = -cyy / (hy * hy);
  r.wym = r.wyp;
  r.wep = -cee / (he * he);
  r.wem = r.wep;
  if (std::abs(ay) * hy <= 2.0 * cyy) {  // central stays monotone here
    r.wyp -= 0.5 * ay / hy;
    r.wym += 0.5 * ay / hy;
  } else if (ay >= 0.0) {  // drift toward +y: couple downstream
    r.diag += ay / hy;
    r.wyp -= ay / hy;
  } else {
    r.diag -= ay / hy;
    r.wym += ay / hy;
  }
  if (std::abs(ae) * he <= 2.0 * cee) {
    r.wep -= 0.5 * ae / he;
    r.wem += 0.5 * ae / he;
  } else if (ae >= 0.0) {
    r.diag += ae / he;
    r.wep -= ae / he;
  } else {
    r.diag -= ae / he;
    r.wem += ae / he;
  }
  return r;
}

}  // namespace

PdeSolution solve_reduced_pde(double mu, double beta, int n, double eta, PdeField which,
                              double eta_bar, int ny, int ne) {
  require(std::isfinite(mu) && mu > 0.0, Status::invalid_argument, "mu must be positive");
  require(std::isfinite(beta), Status::invalid_argument, "drift must be finite");
  require(n >= 1, Status::invalid_argument, "n must be >= 1");
  require(std::isfinite(eta) && eta > 0.0, Status::invalid_argument,
          "threshold must be positive");
  require(ny >= 51 && ne >= 51 && ny % 2 == 1 && ne % 2 == 1, Status::invalid_argument,
          "grid must be odd and at least 51 points per axis");
  if (eta_bar <= 0.0) eta_bar = 6.0 / std::sqrt(mu);
  require(std::isfinite(eta_bar), Status::invalid_argument, "truncation range must be finite");

  PdeSolution sol;
  sol.which = which;
  sol.grid = {ny, ne, -eta, eta, -eta_bar, eta_bar};
  if (eta_bar < 4.0 / std::sqrt(mu))
    sol.warning = "truncation range below 4/sqrt(mu); the far-field boundary may distort "
                  "the interior";

  const double hy = sol.grid.hy(), he = sol.grid.he();
  const double cyy = 0.5 * (n + 1.0) / n, cee = 0.5;
  const double q = 1.0 / (4.0 * hy * he);
  const double f = which == PdeField::mean_time ? 1.0 : 0.0;

  std::vector<RowCoef> rows(ne);
  for (int j = 0; j < ne; ++j) {
    const double e = sol.grid.eps(j);
    rows[j] = make_row(beta - 0.5 * mu * e, -0.5 * mu * e, cyy, cee, hy, he);
  }

  Eigen::MatrixXd& u = sol.values;
  auto reset = [&] {
    u = Eigen::MatrixXd::Zero(ny, ne);
    if (which == PdeField::error_prob) {
      u.row(0).setOnes();                    // y = -eta loses
      u.col(0).setOnes();                    // eps = -eta_bar
      u(0, ne - 1) = 1.0;                    // corners keep the y-edge value
      u(ny - 1, 0) = 0.0;
    }
  };

  // residual scale: rhs plus the boundary data each interior row sees
  reset();
  auto bnd = [&](int i, int j) { return i == 0 || i == ny - 1 || j == 0 || j == ne - 1; };
  double denom2 = 0.0;
  for (int j = 1; j < ne - 1; ++j) {
    const RowCoef& c = rows[j];
    for (int i = 1; i < ny - 1; ++i) {
      double load = std::abs(f);
      if (bnd(i + 1, j)) load += std::abs(c.wyp * u(i + 1, j));
      if (bnd(i - 1, j)) load += std::abs(c.wym * u(i - 1, j));
      if (bnd(i, j + 1)) load += std::abs(c.wep * u(i, j + 1));
      if (bnd(i, j - 1)) load += std::abs(c.wem * u(i, j - 1));
      if (bnd(i + 1, j + 1)) load += q * std::abs(u(i + 1, j + 1));
      if (bnd(i + 1, j - 1)) load += q * std::abs(u(i + 1, j - 1));
      if (bnd(i - 1, j + 1)) load += q * std::abs(u(i - 1, j + 1));
      if (bnd(i - 1, j - 1)) load += q * std::abs(u(i - 1, j - 1));
      denom2 += load * load;
    }
  }
  const double denom = std::max(std::sqrt(denom2), 1e-300);

  // fixed-omega relaxation needs sweeps proportional to the grid area; the
  // aggressive omega can stall (bounded oscillation) on strongly advective
  // boxes, so fall through the ladder on stall as well as on divergence
  const int side = std::max(ny, ne);
  const int max_sweeps = 2 * side * side + 10000;
  const double tol = 1e-9;
  for (double omega : {1.7, 1.4, 1.0}) {
    reset();
    double best = std::numeric_limits<double>::infinity();
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
      for (int j = 1; j < ne - 1; ++j) {
        const RowCoef c = rows[j];
        const double* cm = u.data() + static_cast<std::ptrdiff_t>(j - 1) * ny;
        double* cc = u.data() + static_cast<std::ptrdiff_t>(j) * ny;
        const double* cp = u.data() + static_cast<std::ptrdiff_t>(j + 1) * ny;
        for (int i = 1; i < ny - 1; ++i) {
          const double s = c.wyp * cc[i + 1] + c.wym * cc[i - 1] + c.wep * cp[i] +
                           c.wem * cm[i] +
                           q * (cm[i + 1] + cp[i - 1] - cp[i + 1] - cm[i - 1]);
          cc[i] += omega * ((f - s) / c.diag - cc[i]);
        }
      }
      if (sweep % 25 == 0 || sweep == max_sweeps) {
        double r2 = 0.0;
        for (int j = 1; j < ne - 1; ++j) {
          const RowCoef c = rows[j];
          const double* cm = u.data() + static_cast<std::ptrdiff_t>(j - 1) * ny;
          const double* cc = u.data() + static_cast<std::ptrdiff_t>(j) * ny;
          const double* cp = u.data() + static_cast<std::ptrdiff_t>(j + 1) * ny;
          for (int i = 1; i < ny - 1; ++i) {
            const double s = c.wyp * cc[i + 1] + c.wym * cc[i - 1] + c.wep * cp[i] +
                             c.wem * cm[i] +
                             q * (cm[i + 1] + cp[i - 1] - cp[i + 1] - cm[i - 1]);
            const double r = f - s - c.diag * cc[i];
            r2 += r * r;
          }
        }
        const double rel = std::sqrt(r2) / denom;
        if (rel <= tol) {
          sol.residual = rel;
          sol.sweeps = sweep;
          return sol;
        }
        if (!std::isfinite(rel) || rel > 50.0 * best + 1e-12) break;
        best = std::min(best, rel);
      }
    }
  }
  fail(Status::solver_divergence, "relaxation did not reach the residual target");
}

double ProfileSolution::at(double xq) const {
  const int m = static_cast<int>(x.size());
  const double lo = x[0], hi = x[m - 1], slack = (hi - lo) * 1e-9;
  require(xq >= lo - slack && xq <= hi + slack, Status::out_of_domain,
          "query outside the solution domain");
  const double h = (hi - lo) / (m - 1);
  const double t = std::clamp((xq - lo) / h, 0.0, static_cast<double>(m - 1));
  const int i0 = std::min(static_cast<int>(t), m - 2);
  const double fx = t - i0;
  return (1.0 - fx) * values[i0] + fx * values[i0 + 1];
}

ProfileSolution solve_ddm_profile(double beta, double sigma, double eta, PdeField which,
                                  int npoints) {
  require(std::isfinite(beta), Status::invalid_argument, "drift must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, Status::invalid_argument,
          "diffusion must be positive");
  require(std::isfinite(eta) && eta > 0.0, Status::invalid_argument,
          "threshold must be positive");
  require(npoints >= 5, Status::invalid_argument, "npoints must be >= 5");

  const int m = npoints;
  const double h = 2.0 * eta / (m - 1);
  const double c = 0.5 * sigma * sigma;
  // negated generator with the same hybrid drift differencing as the 2D
  // solver: diag u_i + lo u_{i-1} + up u_{i+1} = f
  double diag = 2.0 * c / (h * h), lo = -c / (h * h), up = -c / (h * h);
  if (std::abs(beta) * h <= 2.0 * c) {
    up -= 0.5 * beta / h;
    lo += 0.5 * beta / h;
  } else if (beta >= 0.0) {
    diag += beta / h;
    up -= beta / h;
  } else {
    diag -= beta / h;
    lo += beta / h;
  }
  const double f = which == PdeField::mean_time ? 1.0 : 0.0;
  const double u_lo = which == PdeField::error_prob ? 1.0 : 0.0;  // losing edge
  const double u_hi = 0.0;

  // Thomas solve over the m-2 interior nodes
  const int k = m - 2;
  std::vector<double> cp(k), dp(k);
  cp[0] = up / diag;
  dp[0] = (f - lo * u_lo) / diag;
  for (int i = 1; i < k; ++i) {
    const double rhs = f - (i == k - 1 ? up * u_hi : 0.0);
    const double w = diag - lo * cp[i - 1];
    cp[i] = i == k - 1 ? 0.0 : up / w;
    dp[i] = (rhs - lo * dp[i - 1]) / w;
  }
  ProfileSolution sol;
  sol.x.resize(m);
  sol.values.resize(m);
  for (int i = 0; i < m; ++i) sol.x[i] = -eta + i * h;
  sol.values[0] = u_lo;
  sol.values[m - 1] = u_hi;
  sol.values[k] = dp[k - 1];
  for (int i = k - 2; i >= 0; --i) sol.values[i + 1] = dp[i] - cp[i] * sol.values[i + 2];
  return sol;
}

}  // namespace cddm
