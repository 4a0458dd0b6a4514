#include "nls/ode_oracle.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "elliptic_oracle.hpp"
#include "nls/error.hpp"

using namespace nls;
using namespace nls::oracle;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("oracle period matches sigma=1 elliptic closed form in every region") {
  struct Case {
    double mu, alpha, nu;
  };
  const Case cases[] = {
      {1.0, 1.0, 1.0},  {4.0, 0.3, 1.0},  {0.5, 2.0, 1.0},   // P++
      {-1.0, 1.5, 1.0}, {-0.2, 0.9, 1.0}, {0.0, 1.0, 1.0},   // P+-
      {1.0, 0.5, -1.0}, {3.0, 0.9, -1.0}, {2.0, 0.1, -2.0},  // P-
  };
  for (const auto& c : cases) {
    const ModelParams params(1, c.nu);
    const ParamPoint p = make_point(c.mu, c.alpha, params);
    REQUIRE(p.region != Region::Outside);
    const double period = measure_period(p, params);
    const double closed = test::elliptic_wavelength_sigma1(c.mu, c.alpha, c.nu);
    CAPTURE(c.mu);
    CAPTURE(c.alpha);
    CHECK(rel(period, closed) < 1e-9);
  }
}

TEST_CASE("zero start returns upward at one period") {
  const ModelParams params(1, 1.0);
  const ParamPoint p = make_point(1.0, 1.0, params);
  const double period = measure_period(p, params);
  const auto traj = integrate(zero_crossing_start(p, params), params, p.mu, 1.5 * period);
  const auto s = traj.state_at(period);
  CHECK(std::abs(s.phi) < 1e-10);
  CHECK(s.dphi > 0.0);
  CHECK(rel(s.dphi, std::sqrt(energy_of(p, params).h)) < 1e-8);
}

TEST_CASE("small amplitude period tends to the linear value") {
  const ModelParams params(1, 1.0);
  const ParamPoint p = make_point(4.0, 1e-4, params);
  CHECK(rel(measure_period(p, params), std::numbers::pi) < 1e-4);
}

TEST_CASE("turning-point start stays inside [-alpha, alpha]") {
  const ModelParams params(1, 1.0);
  const double alpha = 1.3;
  const auto traj = integrate({0.0, alpha, 0.0}, params, 0.7, 40.0);
  double worst = 0.0;
  for (const auto& k : traj.knots()) worst = std::max(worst, std::abs(k.phi));
  CHECK(worst <= alpha * (1.0 + 1e-10));
  CHECK(traj.zeros().size() > 2);
}

TEST_CASE("period grows as mu approaches mu_0 from above") {
  const ModelParams params(1, 1.0);
  double previous = 0.0;
  for (double alpha : {2.0, 1.1, 1.01, 1.001, 1.0001}) {
    const ParamPoint p = make_point(-1.0, alpha, params);
    const double period = measure_period(p, params);
    CHECK(period > previous);
    previous = period;
  }
  CHECK(previous > 20.0);
}

TEST_CASE("mu = 0 surrogate period equals 4 c1") {
  const ModelParams params(1, 1.0);
  const ParamPoint p = make_point(1e-12, 1.0, params);
  CHECK(rel(measure_period(p, params), 4.0 * test::beta_c1(1)) < 1e-9);
}

TEST_CASE("first turning value matches the sigma=1 beta_1 formula") {
  for (double nu : {1.0, -1.0}) {
    const ModelParams params(1, nu);
    const ParamPoint p = nu > 0 ? make_point(-0.5, 1.2, params) : make_point(2.0, 0.6, params);
    const double h = energy_of(p, params).h;
    const double beta2 = *turning_value_squared_sigma1(1, p.mu, h, nu);
    const double beta = first_turning_value(p, params);
    CHECK(std::abs(beta * beta - beta2) < 1e-8);
    CHECK(std::abs(beta - p.alpha) < 1e-8);
  }
}

TEST_CASE("energy drift over ten periods") {
  for (int sigma : {1, 2, 3}) {
    const ModelParams params(sigma, 1.0);
    const ParamPoint p = make_point(0.8, 1.1, params);
    const double period = measure_period(p, params);
    const auto traj = integrate(zero_crossing_start(p, params), params, p.mu, 10.0 * period);
    CAPTURE(sigma);
    CHECK(traj.max_energy_drift() < 1e-9);
    CHECK(traj.zeros().size() == 20);
  }
}

TEST_CASE("blow-up is detected outside the bounded family") {
  const ModelParams params(1, -1.0);
  // Energy above the barrier: phi escapes to infinity.
  OracleOptions o;
  o.blowup_amplitude = 50.0;
  CHECK_THROWS_AS(integrate({0.0, 0.0, 5.0}, params, 1.0, 100.0, o), Error);
}
