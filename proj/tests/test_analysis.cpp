#include <cmath>
#include <functional>
#include <vector>

#include "core/analysis.hpp"
#include "core/status.hpp"
#include "doctest.h"
#include "stats.hpp"

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

}  // namespace

TEST_CASE("scalar exit statistics match the closed forms") {
  const DdmPerformance p = ddm_performance(0.1, 1.0, 3.0);
  CHECK(p.mean_time == doctest::Approx(8.7393783735).epsilon(1e-9));
  CHECK(p.error_rate == doctest::Approx(0.3543436938).epsilon(1e-9));

  // ET = (eta/beta)(1 - 2 ER) ties the two fields together exactly
  for (double beta : {0.05, 0.2, 0.7})
    for (double eta : {0.5, 1.0, 2.5}) {
      const DdmPerformance q = ddm_performance(beta, 1.0, eta);
      CHECK(q.mean_time ==
            doctest::Approx(eta / beta * (1.0 - 2.0 * q.error_rate)).epsilon(1e-13));
    }

  // driftless limit is exact and the formula is continuous through it
  const DdmPerformance z = ddm_performance(0.0, 0.5, 2.0);
  CHECK(z.mean_time == 16.0);
  CHECK(z.error_rate == 0.5);
  const DdmPerformance almost = ddm_performance(1e-12, 0.5, 2.0);
  CHECK(almost.mean_time == doctest::Approx(16.0).epsilon(1e-9));
  CHECK(almost.error_rate == doctest::Approx(0.5).epsilon(1e-9));

  // sign symmetry: flipping the drift swaps the boundary roles
  const DdmPerformance fwd = ddm_performance(0.3, 1.2, 1.7);
  const DdmPerformance bwd = ddm_performance(-0.3, 1.2, 1.7);
  CHECK(bwd.mean_time == doctest::Approx(fwd.mean_time).epsilon(1e-13));
  CHECK(bwd.error_rate == doctest::Approx(1.0 - fwd.error_rate).epsilon(1e-13));

  // strong drift: ET -> eta/beta, ER -> 0
  const DdmPerformance strong = ddm_performance(0.5, 1.0, 20.0);
  CHECK(std::fabs(strong.mean_time - 40.0) <= 1e-6);
  CHECK(strong.error_rate <= 1e-8);

  CHECK(thrown_status([] { ddm_performance(0.1, 0.0, 1.0); }) == Status::invalid_argument);
  CHECK(thrown_status([] { ddm_performance(0.1, 1.0, -1.0); }) == Status::invalid_argument);
}

TEST_CASE("power series agree with direct quadrature") {
  // quadrature oracle built from std::erf only
  auto phi = [](double z) {
    return teststat::simpson([](double t) { return std::exp(t * t); }, 0.0, z, 4000);
  };
  auto psi = [](double z) {
    return teststat::simpson(
        [](double t) { return std::exp(t * t) * 0.8862269254527580 * std::erf(t); }, 0.0, z,
        4000);
  };
  for (double z : {0.25, 0.5, 1.0, 2.0, 3.0, 4.0}) {
    CHECK(exp_square_integral(z) == doctest::Approx(phi(z)).epsilon(1e-9));
    CHECK(exp_square_erf_integral(z) == doctest::Approx(psi(z)).epsilon(1e-9));
  }
  CHECK(exp_square_integral(1.0) == doctest::Approx(1.46265174591).epsilon(1e-10));
  CHECK(exp_square_erf_integral(1.0) == doctest::Approx(0.722622806694).epsilon(1e-10));

  // both integrands are positive and >= the trivial comparison
  double prev_phi = 0.0, prev_psi = 0.0;
  for (double z = 0.2; z <= 5.8; z += 0.2) {
    const double a = exp_square_integral(z), b = exp_square_erf_integral(z);
    CHECK(a > prev_phi);
    CHECK(b >= prev_psi);
    CHECK(a >= z);
    prev_phi = a;
    prev_psi = b;
  }
  CHECK(exp_square_integral(0.0) == 0.0);
  CHECK(exp_square_erf_integral(0.0) == 0.0);

  CHECK(thrown_status([] { exp_square_integral(6.5); }) == Status::domain_overflow);
  CHECK(thrown_status([] { exp_square_erf_integral(7.0); }) == Status::domain_overflow);
  CHECK(thrown_status([] { exp_square_integral(-0.1); }) == Status::invalid_argument);
}

TEST_CASE("mean first-passage time matches its double-integral form") {
  // T(0) = 2 int_0^eta e^{q y^2} sqrt(pi/(4q)) (1 + erf(y sqrt(q))) dy, q = mu/2
  auto oracle = [](double mu, double eta) {
    const double q = 0.5 * mu;
    return teststat::simpson(
        [&](double y) {
          return 2.0 * std::exp(q * y * y) * std::sqrt(M_PI / (4.0 * q)) *
                 (1.0 + std::erf(y * std::sqrt(q)));
        },
        0.0, eta, 6000);
  };
  for (double mu : {0.5, 1.0, 2.0, 4.0})
    for (double eta : {0.5, 1.0, 2.0, 3.0})
      CHECK(ou_mean_fpt(mu, eta) == doctest::Approx(oracle(mu, eta)).epsilon(1e-9));

  CHECK(ou_mean_fpt(2.0, 1.0) == doctest::Approx(4.03772833296).epsilon(1e-10));
  CHECK(ou_mean_fpt(1.0, 2.0) == doctest::Approx(20.856818796).epsilon(1e-10));
  CHECK(ou_mean_fpt(1.0, 3.0) == doctest::Approx(173.863239798).epsilon(1e-10));

  CHECK(thrown_status([] { ou_mean_fpt(0.0, 1.0); }) == Status::invalid_argument);
  CHECK(thrown_status([] { ou_mean_fpt(1.0, 9.0); }) == Status::domain_overflow);
}

TEST_CASE("closed-form envelope brackets the mean first-passage time") {
  for (double mu : {0.5, 1.0, 2.0, 4.0})
    for (double eta : {1.0, 2.0, 3.0, 4.0}) {
      if (eta * std::sqrt(0.5 * mu) > 6.0) continue;
      const double mean = ou_mean_fpt(mu, eta);
      const Bracket b = ou_mean_fpt_bounds(mu, eta);
      CHECK(b.low <= mean);
      CHECK(mean <= b.high);
      CHECK(b.high > 0.0);
    }
  // both ends share the e^{mu eta^2 / 2} rate, so the inflation high/mean is
  // only polynomial: the envelope's prefactor grows like eta while the mean's
  // decays like 1/eta, leaving a ratio of order eta^2
  const double r3 = ou_mean_fpt_bounds(1.0, 3.0).high / ou_mean_fpt(1.0, 3.0);
  const double r4 = ou_mean_fpt_bounds(1.0, 4.0).high / ou_mean_fpt(1.0, 4.0);
  CHECK(r3 / 9.0 > 0.3);
  CHECK(r3 / 9.0 < 3.0);
  CHECK(r4 / 16.0 > 0.3);
  CHECK(r4 / 16.0 < 3.0);
}

TEST_CASE("approximate first-passage density is a unit-mass exponential") {
  const double mu = 1.0, eta = 2.0;
  const double mean = ou_mean_fpt(mu, eta);
  auto dens = [&](double t) { return ou_fpt_density(mu, eta, t); };
  const double mass = teststat::simpson(dens, 0.0, 40.0 * mean, 20000);
  const double first = teststat::simpson([&](double t) { return t * dens(t); }, 0.0,
                                         60.0 * mean, 40000);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(first == doctest::Approx(mean).epsilon(1e-6));
  CHECK(dens(0.0) == doctest::Approx(1.0 / mean).epsilon(1e-12));
  CHECK(thrown_status([&] { ou_fpt_density(mu, eta, -1.0); }) == Status::invalid_argument);
}

TEST_CASE("containment probability behaves like a survival function") {
  CHECK(ou_containment_lower(1.5, 2.0, 0.0) == 1.0);
  // small bands give the vacuous bound
  CHECK(ou_containment_lower(0.3, 2.0, 5.0) == 0.0);

  // increasing in the band width, decreasing in time
  double prev = 0.0;
  for (double K : {0.8, 1.2, 2.0, 3.0}) {
    const double p = ou_containment_lower(K, 2.0, 10.0);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK(prev > 0.0);
  CHECK(prev <= 1.0);
  CHECK(ou_containment_lower(2.0, 2.0, 20.0) < ou_containment_lower(2.0, 2.0, 10.0));

  // mu enters only through the 2/mu time scale
  CHECK(ou_containment_lower(1.5, 1.0, 8.0) ==
        doctest::Approx(ou_containment_lower(1.5, 2.0, 4.0)).epsilon(1e-13));

  CHECK(ou_uniform_bound(2.0, 2.0, 10.0, true) ==
        doctest::Approx(2.0 * ou_uniform_bound(2.0, 2.0, 10.0, false) - 1.0).epsilon(1e-13));
}

TEST_CASE("performance sandwich pins the shifted scalar thresholds") {
  // eta = 3, K = 2, mu = 4 shifts the threshold by 1 either way; with
  // beta = 0.1, n = 9 the ends are 20 tanh(1.8), 40 tanh(3.6) and
  // 1/(1 + e^{7.2}), 1/(1 + e^{3.6})
  const PerformanceBounds b = reduced_performance_bounds(3.0, 2.0, 4.0, 0.1, 9);
  CHECK(b.et_low == doctest::Approx(20.0 * std::tanh(1.8)).epsilon(1e-13));
  CHECK(b.et_high == doctest::Approx(40.0 * std::tanh(3.6)).epsilon(1e-13));
  CHECK(b.er_low == doctest::Approx(1.0 / (1.0 + std::exp(7.2))).epsilon(1e-13));
  CHECK(b.er_high == doctest::Approx(1.0 / (1.0 + std::exp(3.6))).epsilon(1e-13));
  CHECK(b.et_low == doctest::Approx(18.93612).epsilon(1e-5));
  CHECK(b.et_high == doctest::Approx(39.94032).epsilon(1e-5));
  CHECK(b.er_low == doctest::Approx(7.4603e-4).epsilon(1e-3));
  CHECK(b.er_high == doctest::Approx(0.0265970).epsilon(1e-3));
  CHECK(b.K == 2.0);
  CHECK(b.confidence ==
        doctest::Approx(ou_uniform_bound(2.0, 4.0, b.et_high, true)).epsilon(1e-13));

  // ends coincide with the scalar formulas at eta -+ K/sqrt(mu)
  const DdmPerformance tight = ddm_performance(0.1, 1.0 / 3.0, 2.0);
  const DdmPerformance wide = ddm_performance(0.1, 1.0 / 3.0, 4.0);
  CHECK(b.et_low == tight.mean_time);
  CHECK(b.et_high == wide.mean_time);
  CHECK(b.er_low == wide.error_rate);
  CHECK(b.er_high == tight.error_rate);

  // K = 0 collapses the sandwich; no containment statement is possible
  const PerformanceBounds c = reduced_performance_bounds(3.0, 0.0, 4.0, 0.1, 9);
  CHECK(c.et_low == c.et_high);
  CHECK(c.er_low == c.er_high);
  CHECK(c.confidence == -1.0);

  // widening K nests the brackets
  const PerformanceBounds k1 = reduced_performance_bounds(3.0, 1.0, 4.0, 0.1, 9);
  const PerformanceBounds k2 = reduced_performance_bounds(3.0, 2.0, 4.0, 0.1, 9);
  CHECK(k2.et_low <= k1.et_low);
  CHECK(k2.et_high >= k1.et_high);
  CHECK(k2.er_low <= k1.er_low);
  CHECK(k2.er_high >= k1.er_high);
  // the e^{-mu K^2/2} containment gain beats the longer horizon it must cover
  CHECK(k2.confidence >= k1.confidence);

  CHECK(thrown_status([] { reduced_performance_bounds(0.5, 2.0, 4.0, 0.1, 9); }) ==
        Status::invalid_regime);
  CHECK(thrown_status([] { reduced_performance_bounds(3.0, -1.0, 4.0, 0.1, 9); }) ==
        Status::invalid_argument);
  CHECK(thrown_status([] { reduced_performance_bounds(3.0, 2.0, 4.0, 0.0, 9); }) ==
        Status::invalid_argument);
}
