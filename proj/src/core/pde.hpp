#pragma once

#include <Eigen/Dense>
#include <string>

namespace cddm {

enum class PdeField { mean_time, error_prob };

struct PdeGrid {
  int ny = 0, ne = 0;
  double y_lo = 0.0, y_hi = 0.0;
  double e_lo = 0.0, e_hi = 0.0;

  double hy() const { return (y_hi - y_lo) / (ny - 1); }
  double he() const { return (e_hi - e_lo) / (ne - 1); }
  double y(int i) const { return y_lo + i * hy(); }
  double eps(int j) const { return e_lo + j * he(); }
};

// Finite-difference solution on the rectangle [-eta, eta] x [-eta_bar,
// eta_bar]; values(i, j) holds the field at (y(i), eps(j)).
//
// Binary dump layout (little-endian, documented for external readers):
//   8 bytes   magic "RDDMPDE1"
//   int32     field: 0 = mean_time, 1 = error_prob
//   int32     ny, int32 ne
//   double    y_lo, y_hi, e_lo, e_hi
//   ny*ne     doubles, row-major (eps index fastest)
struct PdeSolution {
  PdeGrid grid;
  PdeField which = PdeField::mean_time;
  Eigen::MatrixXd values;  // ny x ne
  double residual = 0.0;   // relative residual of the discrete system
  int sweeps = 0;
  std::string warning;     // nonempty when the truncation range is suspect

  // bilinear interpolation; exact on grid nodes
  double at(double y, double eps) const;

  std::string to_csv() const;                       // y,eps,value
  void write_csv(const std::string& path) const;
  void write_binary(const std::string& path) const;
  static PdeSolution read_binary(const std::string& path);
};

// Mean decision time (rhs -1, zero boundary data) or error probability
// (rhs 0; 1 on the losing edges y = -eta / eps = -eta_bar, 0 on the winning
// ones, corners keep the y-edge value) for the two-state reduction
//   dy = (beta - mu e/2) dt + (1/sqrt(n)) dW1 + dW2,  de = -(mu e/2) dt + dW2
// solved with hybrid advection (central where the cell Peclet number keeps
// the row monotone, upwind elsewhere), central diffusion and the four-corner
// cross stencil, by SOR (omega = 1.7) with a plain Gauss-Seidel retry.
// eta_bar <= 0 selects the default truncation 6/sqrt(mu).
PdeSolution solve_reduced_pde(double mu, double beta, int n, double eta, PdeField which,
                              double eta_bar = 0.0, int ny = 201, int ne = 201);

// 1D instance of the same discretization applied to dx = beta dt + sigma dW
// on [-eta, eta] (direct tridiagonal solve); profiles the full initial-state
// dependence, value at x = 0 matches the closed forms
struct ProfileSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd values;
  double at(double xq) const;  // linear interpolation
};
ProfileSolution solve_ddm_profile(double beta, double sigma, double eta, PdeField which,
                                  int npoints = 401);

}  // namespace cddm
