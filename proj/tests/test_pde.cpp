#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "core/pde.hpp"
#include "core/status.hpp"
#include "doctest.h"

using namespace cddm;

namespace {

Status thrown_status(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.status();
  }
  return Status::ok;
}

std::string temp_path(const char* tag) {
  std::string tmpl = std::string("/tmp/cddm_pde_") + tag + "_XXXXXX";
  const int fd = mkstemp(tmpl.data());
  REQUIRE(fd >= 0);
  close(fd);
  return tmpl;
}

// closed forms for dx = beta dt + sigma dW exiting (-eta, eta), as functions
// of the start point, via s(x) = e^{-2 beta x / sigma^2}
struct Scalar1d {
  double beta, sigma, eta;
  double s(double x) const { return std::exp(-2.0 * beta * x / (sigma * sigma)); }
  double er(double x) const { return (s(x) - s(eta)) / (s(-eta) - s(eta)); }
  double et(double x) const {
    const double c2 = 2.0 * eta / beta / (s(eta) - s(-eta));
    return (eta - x) / beta + c2 * (s(x) - s(eta));
  }
};

}  // namespace

TEST_CASE("1d profiles match the closed forms across the interval") {
  for (const Scalar1d ref : {Scalar1d{0.3, 1.0, 1.0}, Scalar1d{0.1, 0.5, 2.0}}) {
    const ProfileSolution et = solve_ddm_profile(ref.beta, ref.sigma, ref.eta,
                                                 PdeField::mean_time, 401);
    const ProfileSolution er = solve_ddm_profile(ref.beta, ref.sigma, ref.eta,
                                                 PdeField::error_prob, 401);
    REQUIRE(et.x.size() == 401);
    CHECK(et.x[0] == -ref.eta);
    CHECK(et.x[400] == ref.eta);
    CHECK(et.values[0] == 0.0);
    CHECK(et.values[400] == 0.0);
    CHECK(er.values[0] == 1.0);
    CHECK(er.values[400] == 0.0);

    for (int k = 1; k < 20; ++k) {
      const double x = -ref.eta + k * ref.eta / 10.0;
      CHECK(et.at(x) == doctest::Approx(ref.et(x)).epsilon(5e-3));
      CHECK(er.at(x) == doctest::Approx(ref.er(x)).epsilon(5e-3).scale(1.0));
    }
  }
}

TEST_CASE("1d advection-dominated solve stays sane") {
  // beta h > sigma^2 switches the scheme to upwinding; away from the thin
  // boundary layer the exact mean time is linear, which upwinding represents
  // exactly
  const ProfileSolution et = solve_ddm_profile(20.0, 0.2, 1.0, PdeField::mean_time, 401);
  const ProfileSolution er = solve_ddm_profile(20.0, 0.2, 1.0, PdeField::error_prob, 401);
  CHECK(et.at(0.0) == doctest::Approx(0.05).epsilon(1e-2));
  CHECK(er.at(0.0) <= 1e-6);
  for (int i = 1; i < 401; ++i) CHECK(er.values[i] <= er.values[i - 1] + 1e-12);
}

TEST_CASE("2d solution reports its grid and satisfies the boundary data") {
  const double mu = 2.0, eta = 1.5;
  const PdeSolution et = solve_reduced_pde(mu, 0.1, 9, eta, PdeField::mean_time, 0.0, 61, 61);
  CHECK(et.grid.ny == 61);
  CHECK(et.grid.ne == 61);
  CHECK(et.grid.y_lo == -eta);
  CHECK(et.grid.y_hi == eta);
  CHECK(et.grid.e_lo == doctest::Approx(-6.0 / std::sqrt(mu)).epsilon(1e-15));
  CHECK(et.which == PdeField::mean_time);
  CHECK(et.residual <= 1e-9);
  CHECK(et.sweeps > 0);
  CHECK(et.warning.empty());

  for (int j = 0; j < 61; ++j) {
    CHECK(et.values(0, j) == 0.0);
    CHECK(et.values(60, j) == 0.0);
  }
  for (int i = 0; i < 61; ++i) {
    CHECK(et.values(i, 0) == 0.0);
    CHECK(et.values(i, 60) == 0.0);
  }
  CHECK(et.values.minCoeff() >= 0.0);
  CHECK(et.values(30, 30) > 0.0);

  const PdeSolution er = solve_reduced_pde(mu, 0.1, 9, eta, PdeField::error_prob, 0.0, 61, 61);
  for (int j = 1; j < 60; ++j) {
    CHECK(er.values(0, j) == 1.0);
    CHECK(er.values(60, j) == 0.0);
  }
  // the centered stencil is not strictly monotone, so the probability field
  // may overshoot [0, 1] by parts per million; anything larger means a broken
  // discretization, not roundoff
  CHECK(er.values.minCoeff() >= -5e-5);
  CHECK(er.values.maxCoeff() <= 1.0 + 5e-5);

  // interpolation is exact on nodes and bilinear inside cells
  for (int i : {0, 7, 30, 60})
    for (int j : {0, 13, 30, 60})
      CHECK(et.at(et.grid.y(i), et.grid.eps(j)) ==
            doctest::Approx(et.values(i, j)).epsilon(1e-12).scale(1.0));
  const double ym = 0.5 * (et.grid.y(10) + et.grid.y(11));
  const double em = 0.5 * (et.grid.eps(20) + et.grid.eps(21));
  const double corners = 0.25 * (et.values(10, 20) + et.values(11, 20) + et.values(10, 21) +
                                 et.values(11, 21));
  CHECK(et.at(ym, em) == doctest::Approx(corners).epsilon(1e-11));

  CHECK(thrown_status([&] { et.at(eta * 1.001, 0.0); }) == Status::out_of_domain);
  CHECK(thrown_status([&] { et.at(0.0, et.grid.e_hi * 1.001); }) == Status::out_of_domain);
  CHECK(et.at(eta * (1.0 + 1e-10), 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("driftless error probability is one half at the origin") {
  // beta = 0 makes the problem antisymmetric under (y, eps) -> (-y, -eps),
  // which swaps the winning and losing edges
  const PdeSolution er =
      solve_reduced_pde(2.0, 0.0, 9, 1.0, PdeField::error_prob, 0.0, 101, 101);
  CHECK(er.at(0.0, 0.0) == doctest::Approx(0.5).epsilon(2e-4));
}

TEST_CASE("interior values barely move when the truncation box widens") {
  const double mu = 4.0;
  const PdeSolution a =
      solve_reduced_pde(mu, 0.1, 9, 2.0, PdeField::mean_time, 0.0, 101, 101);  // eta_bar = 3
  const PdeSolution b =
      solve_reduced_pde(mu, 0.1, 9, 2.0, PdeField::mean_time, 4.0, 101, 101);
  CHECK(a.warning.empty());
  CHECK(b.warning.empty());
  CHECK(a.at(0.0, 0.0) == doctest::Approx(b.at(0.0, 0.0)).epsilon(1e-2));

  const PdeSolution tight =
      solve_reduced_pde(mu, 0.1, 9, 2.0, PdeField::mean_time, 1.5, 51, 51);
  CHECK(!tight.warning.empty());
  CHECK(tight.warning.find("truncation") != std::string::npos);
}

TEST_CASE("binary dumps round-trip bitwise") {
  const PdeSolution sol =
      solve_reduced_pde(1.5, 0.2, 4, 1.0, PdeField::error_prob, 0.0, 51, 53);
  const std::string path = temp_path("rt");
  sol.write_binary(path);

  std::ifstream probe(path, std::ios::binary);
  char magic[9] = {0};
  probe.read(magic, 8);
  CHECK(std::string(magic) == "RDDMPDE1");
  probe.close();

  const PdeSolution back = PdeSolution::read_binary(path);
  CHECK(back.which == sol.which);
  CHECK(back.grid.ny == sol.grid.ny);
  CHECK(back.grid.ne == sol.grid.ne);
  CHECK(back.grid.y_lo == sol.grid.y_lo);
  CHECK(back.grid.e_hi == sol.grid.e_hi);
  CHECK((back.values.array() == sol.values.array()).all());
  std::remove(path.c_str());

  const std::string bad = temp_path("bad");
  std::ofstream(bad, std::ios::binary) << "NOTAGRID and then some";
  CHECK(thrown_status([&] { PdeSolution::read_binary(bad); }) == Status::parse_error);
  std::remove(bad.c_str());

  const std::string trunc = temp_path("trunc");
  std::ofstream(trunc, std::ios::binary) << "RDDMPDE1";
  CHECK(thrown_status([&] { PdeSolution::read_binary(trunc); }) == Status::parse_error);
  std::remove(trunc.c_str());
}

TEST_CASE("grid CSV lists every node under a fixed header") {
  const PdeSolution sol =
      solve_reduced_pde(1.5, 0.2, 4, 1.0, PdeField::mean_time, 0.0, 51, 51);
  const std::string csv = sol.to_csv();
  CHECK(csv.rfind("y,eps,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 51 * 51 + 1);
  CHECK(csv.find("nan") == std::string::npos);
}

TEST_CASE("solver argument validation") {
  CHECK(thrown_status([] {
          solve_reduced_pde(0.0, 0.1, 9, 1.0, PdeField::mean_time);
        }) == Status::invalid_argument);
  CHECK(thrown_status([] {
          solve_reduced_pde(1.0, 0.1, 9, -1.0, PdeField::mean_time);
        }) == Status::invalid_argument);
  CHECK(thrown_status([] {
          solve_reduced_pde(1.0, 0.1, 9, 1.0, PdeField::mean_time, 0.0, 60, 61);
        }) == Status::invalid_argument);
  CHECK(thrown_status([] {
          solve_reduced_pde(1.0, 0.1, 9, 1.0, PdeField::mean_time, 0.0, 61, 49);
        }) == Status::invalid_argument);
  CHECK(thrown_status([] { solve_ddm_profile(0.1, 0.0, 1.0, PdeField::mean_time); }) ==
        Status::invalid_argument);
  CHECK(thrown_status([] { solve_ddm_profile(0.1, 1.0, 1.0, PdeField::mean_time, 4); }) ==
        Status::invalid_argument);
}
