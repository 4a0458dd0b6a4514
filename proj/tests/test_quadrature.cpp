#include "nls/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "elliptic_oracle.hpp"
#include "nls/error.hpp"
#include "nls/ode_oracle.hpp"

using namespace nls;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Random point strictly inside the requested region, kept away from the
// diverging boundaries so finite differences stay meaningful.
ParamPoint random_point(Region region, const ModelParams& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    double mu = 0.0, alpha = 0.0;
    switch (region) {
      case Region::PPlusPlus:
        mu = 0.05 + 5.0 * u(rng);
        alpha = 0.2 + 2.0 * u(rng);
        break;
      case Region::PPlusMinus:
        alpha = 0.2 + 2.0 * u(rng);
        mu = mu_zero_boundary(alpha, p) * (0.02 + 0.93 * u(rng));
        break;
      default:
        mu = 0.1 + 5.0 * u(rng);
        alpha = alpha_critical(mu, p) * (0.02 + 0.93 * u(rng));
        break;
    }
    const ParamPoint pt = make_point(mu, alpha, p);
    if (pt.region == region) return pt;
  }
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int order : {8, 16, 64}) {
    const auto& rule = quad::gauss_legendre(order);
    for (int k = 0; k < 2 * order; k += 3) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
  CHECK_THROWS_AS(quad::gauss_legendre(12), std::invalid_argument);
}

TEST_CASE("small amplitude wavelength tends to 2 pi mu^(-1/2)") {
  const ModelParams p(1, 1.0);
  CHECK(rel(wavelength(make_point(4.0, 1e-4, p), p).lambda, std::numbers::pi) < 1e-4);
}

TEST_CASE("reference wavelength at (1, 1)") {
  // Frozen from the ODE oracle period and the sigma = 1 elliptic form.
  constexpr double kReference = 4.004309521824425;
  const ModelParams p(1, 1.0);
  const ParamPoint pt = make_point(1.0, 1.0, p);
  CHECK(rel(oracle::measure_period(pt, p), kReference) < 1e-9);
  CHECK(rel(test::elliptic_wavelength_sigma1(1.0, 1.0, 1.0), kReference) < 1e-14);
  const auto w = wavelength(pt, p);
  CHECK(rel(w.lambda, kReference) < 1e-12);
  CHECK(w.est_error >= 0.0);
  CHECK(rel(wavelength_value(pt, p), kReference) < 1e-12);
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(11);
  for (int sigma : {1, 2}) {
    for (Region region : {Region::PPlusPlus, Region::PPlusMinus, Region::PMinus}) {
      const ModelParams p(sigma, region == Region::PMinus ? -1.0 : 1.0);
      for (int i = 0; i < 100; ++i) {
        const ParamPoint pt = random_point(region, p, rng);
        const auto w = wavelength(pt, p);
        const double hm = 1e-6 * std::max(1.0, std::abs(pt.mu));
        const double ha = 1e-6 * std::max(1.0, pt.alpha);
        const double fd_mu = (wavelength_value(make_point(pt.mu + hm, pt.alpha, p), p) -
                              wavelength_value(make_point(pt.mu - hm, pt.alpha, p), p)) /
                             (2 * hm);
        const double fd_a = (wavelength_value(make_point(pt.mu, pt.alpha + ha, p), p) -
                             wavelength_value(make_point(pt.mu, pt.alpha - ha, p), p)) /
                            (2 * ha);
        CAPTURE(sigma);
        CAPTURE(pt.mu);
        CAPTURE(pt.alpha);
        CHECK(rel(w.d_mu, fd_mu) < 1e-5);
        CHECK(rel(w.d_alpha, fd_a) < 1e-5);
        CHECK(w.lambda > 0.0);
        CHECK(w.d_mu < 0.0);
        if (p.nu > 0)
          CHECK(w.d_alpha < 0.0);
        else
          CHECK(w.d_alpha > 0.0);
        const auto g = wavelength_gradient(pt, p);
        CHECK(g.d_mu == w.d_mu);
        CHECK(g.d_alpha == w.d_alpha);
      }
    }
  }
}

TEST_CASE("mu = 0 constants against independent oracles") {
  for (int sigma : {1, 2, 3}) {
    const auto c = constants_c(ModelParams(sigma, 1.0));
    CHECK(rel(c.c1, test::beta_c1(sigma)) < 1e-13);
    boost::math::quadrature::tanh_sinh<double> ts;
    const double q = 2.0 * (sigma + 1);
    const double c2 = ts.integrate([q](double w, double wc) {
      // (1 - w^q)^(-3/2) (1 - w^2); wc = 1 - w near the right end.
      const double one_minus_wq = w > 0.5 ? -std::expm1(q * std::log1p(-wc)) : 1.0 - std::pow(w, q);
      const double one_minus_w2 = w > 0.5 ? wc * (2.0 - wc) : 1.0 - w * w;
      return (one_minus_w2 / one_minus_wq) / std::sqrt(one_minus_wq);
    }, 0.0, 1.0);
    CAPTURE(sigma);
    CHECK(rel(c.c2, c2) < 1e-10);
    CHECK(c.c3 == doctest::Approx(c.c2 / c.c1).epsilon(1e-15));
    CHECK(c.c3 > 0.0);
  }
  CHECK(std::abs(constants_c(ModelParams(1, 1.0)).c1 - 1.311029) < 1e-6);
}

TEST_CASE("mu_zero_wavelength examples") {
  const ModelParams p(1, 1.0);
  const auto c = constants_c(p);
  const auto one = mu_zero_wavelength(1.0, p);
  CHECK(one.lambda == doctest::Approx(4.0 * c.c1).epsilon(1e-15));
  CHECK(std::abs(one.lambda - 5.24412) < 1e-5);
  CHECK(one.d_mu == doctest::Approx(-2.0 * c.c2).epsilon(1e-15));
  CHECK(mu_zero_wavelength(2.0, p).lambda == doctest::Approx(0.5 * one.lambda).epsilon(1e-15));
  CHECK_THROWS_AS(mu_zero_wavelength(1.0, ModelParams(1, -1.0)), Error);
  CHECK_THROWS_AS(mu_zero_wavelength(0.0, p), Error);
}

TEST_CASE("quadrature at mu near 0 agrees with the closed forms") {
  for (int sigma : {1, 2}) {
    for (double nu : {1.0, 2.5}) {
      const ModelParams p(sigma, nu);
      for (double alpha : {0.3, 1.0, 1.7}) {
        const auto closed = mu_zero_wavelength(alpha, p);
        const auto w = wavelength(make_point(1e-12, alpha, p), p);
        CHECK(rel(w.lambda, closed.lambda) < 1e-8);
        CHECK(rel(w.d_alpha, closed.d_alpha) < 1e-8);
        CHECK(rel(w.d_mu, closed.d_mu) < 1e-8);
        // Continuity from the P+- side.
        const auto wm = wavelength(make_point(-1e-12, alpha, p), p);
        CHECK(rel(wm.lambda, closed.lambda) < 1e-8);
      }
    }
  }
}

TEST_CASE("limit law: error decreases as alpha shrinks") {
  for (double nu : {1.0, -1.0}) {
    const ModelParams p(1, nu);
    const double mu = 2.0;
    double prev = INFINITY;
    for (double alpha : {1e-2, 1e-3, 1e-4}) {
      const double err = rel(wavelength(make_point(mu, alpha, p), p).lambda, 2.0 * std::numbers::pi / std::sqrt(mu));
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-7);
  }
}

TEST_CASE("divergence law at the region boundaries") {
  SUBCASE("mu decreasing to mu_0 in P+-") {
    const ModelParams p(1, 1.0);
    const double alpha = 0.01;
    const double mu0 = mu_zero_boundary(alpha, p);
    double prev = 0.0;
    for (double eps = 1e-1; eps > 2e-12; eps *= 0.1) {
      const double lam = wavelength(make_point(mu0 * (1.0 - eps), alpha, p), p).lambda;
      CHECK(lam > prev);
      prev = lam;
    }
    CHECK(prev > 1e3);
    // Within the guard the integral is reported, not evaluated.
    CHECK_THROWS_AS(wavelength(make_point(mu0 * (1.0 - 1e-14), alpha, p), p), Error);
  }
  SUBCASE("mu decreasing to mu_c in P-") {
    const ModelParams p(1, -1.0);
    const double alpha = 0.01;
    const double muc = mu_critical_boundary(alpha, p);
    double prev = 0.0;
    for (double eps = 1e-1; eps > 2e-12; eps *= 0.1) {
      const double lam = wavelength(make_point(muc * (1.0 + eps), alpha, p), p).lambda;
      CHECK(lam > prev);
      prev = lam;
    }
    CHECK(prev > 1e3);
    CHECK_THROWS_AS(wavelength(make_point(muc * (1.0 + 1e-14), alpha, p), p), Error);
  }
}

TEST_CASE("outside points are rejected") {
  const ModelParams p(1, 1.0);
  try {
    wavelength(make_point(-1.0, 1.0, p), p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutsideRegion);
  }
  try {
    wavelength(make_point(-1.0, 1.0 + 1e-15, p), p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivergingIntegral);
  }
}

TEST_CASE("quadrature wavelength equals the oracle period across regions") {
  struct Case {
    int sigma;
    double nu, mu, alpha;
  };
  const Case cases[] = {
      {1, 1.0, 1.0, 1.0},    {1, 1.0, 4.0, 0.3},   {1, 1.0, 0.5, 2.0},   {2, 1.0, 2.0, 1.2},  {3, 1.0, 0.7, 0.9},
      {1, 2.0, 3.0, 0.6},    {1, 1.0, -1.0, 1.5},  {1, 1.0, -0.2, 0.9},  {2, 1.0, -0.5, 1.1}, {3, 1.0, -0.3, 1.0},
      {1, 0.5, -0.1, 1.3},   {2, 2.0, -1.0, 1.2},  {1, -1.0, 1.0, 0.5},  {1, -1.0, 3.0, 0.9}, {1, -2.0, 2.0, 0.1},
      {2, -1.0, 1.0, 0.6},   {3, -1.0, 2.0, 0.8},  {1, -0.5, 0.4, 0.55}, {2, -2.0, 5.0, 0.9}, {1, 1.0, 1e-3, 3.0},
      {1, -1.0, 1.0, 0.7},   {3, 1.0, -0.02, 0.6},
  };
  int per_region[3] = {0, 0, 0};
  for (const auto& c : cases) {
    const ModelParams p(c.sigma, c.nu);
    const ParamPoint pt = make_point(c.mu, c.alpha, p);
    REQUIRE(pt.region != Region::Outside);
    ++per_region[static_cast<int>(pt.region)];
    CAPTURE(c.sigma);
    CAPTURE(c.mu);
    CAPTURE(c.alpha);
    CHECK(rel(wavelength(pt, p).lambda, oracle::measure_period(pt, p)) < 1e-6);
  }
  for (int k : per_region) CHECK(k >= 5);
}
