#include "nls/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "doctest.h"
#include "nls/error.hpp"

using namespace nls;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams(0, 1.0), Error);
  CHECK_THROWS_AS(ModelParams(1, 0.0), Error);
  CHECK_THROWS_AS(IntervalProblem(0.0, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet, {}), Error);
  CHECK_THROWS_AS(StarGraph({1.0, 1.0}, {BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet}, {}), Error);
  CHECK_THROWS_AS(StarGraph({1.0, 1.0, -1.0}, std::vector<BoundaryCondition>(3, BoundaryCondition::Dirichlet), {}),
                  Error);
  CHECK_NOTHROW(StarGraph({1.0, 2.0, 3.0}, std::vector<BoundaryCondition>(3, BoundaryCondition::Neumann), {}));
}

TEST_CASE("classify_region examples") {
  CHECK(classify_region(1.0, 1.0, ModelParams(1, 1.0)) == Region::PPlusPlus);
  CHECK(classify_region(-1.0, 2.0, ModelParams(1, 1.0)) == Region::PPlusMinus);
  CHECK(classify_region(1.0, 0.5, ModelParams(1, -1.0)) == Region::PMinus);
  CHECK(std::abs(alpha_critical(1.0, ModelParams(1, -1.0)) - std::sqrt(0.5)) < 1e-15);
  CHECK_THROWS_AS(classify_region(1.0, 0.0, ModelParams(1, 1.0)), Error);
  CHECK_THROWS_AS(classify_region(1.0, -1.0, ModelParams(1, 1.0)), Error);
}

TEST_CASE("region boundaries are Outside") {
  const ModelParams pos(1, 1.0);
  CHECK(classify_region(-1.0, 1.0, pos) == Region::Outside);  // alpha == alpha_0
  CHECK(classify_region(-4.0, 1.0, pos) == Region::Outside);
  CHECK(classify_region(0.0, 1e-9, pos) == Region::PPlusMinus);  // alpha_0 = 0 at mu = 0
  const ModelParams neg(1, -1.0);
  CHECK(classify_region(2.0, 1.0, neg) == Region::Outside);  // alpha == alpha_c
  CHECK(classify_region(0.0, 0.1, neg) == Region::Outside);
  CHECK(classify_region(-1.0, 0.1, neg) == Region::Outside);
}

TEST_CASE("classification is a partition on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu_d(-5.0, 5.0), a_d(1e-3, 3.0);
  std::uniform_int_distribution<int> s_d(1, 4);
  for (int i = 0; i < 2000; ++i) {
    const ModelParams p(s_d(rng), (i % 2 ? 1.0 : -1.0) * (0.1 + 2.0 * a_d(rng)));
    const double mu = mu_d(rng), alpha = a_d(rng);
    const Region r = classify_region(mu, alpha, p);
    int hits = 0;
    hits += p.nu > 0 && mu > 0;
    hits += p.nu > 0 && mu <= 0 && alpha > alpha_zero(mu, p);
    hits += p.nu < 0 && mu > 0 && alpha < alpha_critical(mu, p);
    CHECK(hits <= 1);
    CHECK((hits == 1) == (r != Region::Outside));
    if (r == Region::Outside) continue;
    const double h = energy_of(make_point(mu, alpha, p), p).h;
    if (r == Region::PMinus) {
      CHECK(h > 0.0);
      CHECK(h < critical_energy(mu, p));
    } else {
      CHECK(h > 0.0);
    }
  }
}

TEST_CASE("energy_of examples") {
  const ModelParams pos(1, 1.0);
  CHECK(energy_of(make_point(0.0, 1.0, pos), pos).h == doctest::Approx(1.0));
  CHECK(energy_of(make_point(1.0, 1.0, pos), pos).h == doctest::Approx(2.0));
  const ModelParams neg(1, -1.0);
  const double h = energy_of(make_point(1.0, 0.5, neg), neg).h;
  CHECK(h == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(critical_energy(1.0, neg) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(energy_of(ParamPoint{1.0, 1.0, Region::Outside}, pos), Error);
}

TEST_CASE("target_wavelength") {
  using BC = BoundaryCondition;
  const ModelParams p(1, 1.0);
  CHECK(*target_wavelength(1, IntervalProblem(std::numbers::pi, BC::Dirichlet, BC::Dirichlet, p)) ==
        doctest::Approx(2.0 * std::numbers::pi));
  CHECK(*target_wavelength(2, IntervalProblem(1.0, BC::Dirichlet, BC::Neumann, p)) == doctest::Approx(4.0 / 3.0));
  CHECK(*target_wavelength(2, IntervalProblem(1.0, BC::Neumann, BC::Dirichlet, p)) == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(target_wavelength(1, IntervalProblem(1.0, BC::Neumann, BC::Neumann, p)).has_value());
  // N-N: the n-th admissible curve has n - 1 half waves.
  CHECK(*target_wavelength(2, IntervalProblem(1.0, BC::Neumann, BC::Neumann, p)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(target_wavelength(0, IntervalProblem(1.0, BC::Dirichlet, BC::Dirichlet, p)), Error);
  for (auto [l, r] : {std::pair{BC::Dirichlet, BC::Dirichlet}, {BC::Dirichlet, BC::Neumann}, {BC::Neumann, BC::Neumann}}) {
    const IntervalProblem prob(2.0, l, r, p);
    double prev = INFINITY;
    for (int n = 1; n <= 20; ++n) {
      const auto lam = target_wavelength(n, prob);
      if (!lam) continue;
      CHECK(*lam < prev);
      prev = *lam;
    }
  }
}

TEST_CASE("potential cases and orbit classifier") {
  const ModelParams pos(1, 1.0), neg(1, -1.0);
  CHECK(potential_case(0.0, pos) == PotentialCase::I);
  CHECK(potential_case(-1.0, pos) == PotentialCase::II);
  CHECK(potential_case(1.0, neg) == PotentialCase::III);
  CHECK(potential_case(-1.0, neg) == PotentialCase::IV);

  CHECK(classify_orbit(1.0, -1.0, pos) == OrbitKind::NoSolution);
  CHECK(classify_orbit(1.0, 0.0, pos) == OrbitKind::Constant);
  CHECK(classify_orbit(1.0, 1.0, pos) == OrbitKind::PeriodicWithZeros);
  // Case II: h_c = -mu^2/(4 nu) for sigma = 1
  CHECK(critical_energy(-1.0, pos) == doctest::Approx(-0.25));
  CHECK(classify_orbit(-1.0, -0.3, pos) == OrbitKind::NoSolution);
  CHECK(classify_orbit(-1.0, -0.1, pos) == OrbitKind::PeriodicDefiniteSign);
  CHECK(classify_orbit(-1.0, 0.0, pos) == OrbitKind::Soliton);
  CHECK(classify_orbit(-1.0, 0.5, pos) == OrbitKind::PeriodicWithZeros);
  CHECK(classify_orbit(1.0, 0.1, neg) == OrbitKind::PeriodicWithZeros);
  CHECK(classify_orbit(1.0, 0.25, neg) == OrbitKind::Kink);
  CHECK(classify_orbit(1.0, 0.5, neg) == OrbitKind::Unbounded);
  CHECK(classify_orbit(1.0, -0.5, neg) == OrbitKind::Unbounded);
  CHECK(classify_orbit(-1.0, 0.0, neg) == OrbitKind::Constant);
  CHECK(classify_orbit(-1.0, 1.0, neg) == OrbitKind::Unbounded);
}

TEST_CASE("sigma=1 turning values recover alpha on P") {
  const ModelParams pos(1, 1.0), neg(1, -1.0);
  const std::tuple<double, double, ModelParams> cases[] = {{1.0, 1.0, pos}, {-1.0, 2.0, pos}, {1.0, 0.5, neg}};
  for (const auto& [mu, alpha, p] : cases) {
    const double h = energy_of(make_point(mu, alpha, p), p).h;
    CHECK(*turning_value_squared_sigma1(1, mu, h, p.nu) == doctest::Approx(alpha * alpha).epsilon(1e-14));
  }
}
