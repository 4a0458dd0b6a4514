#include "nls/interval_spectrum.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nls/ode_oracle.hpp"
#include "nls/quadrature.hpp"
#include "nls/solution.hpp"

using namespace nls;
using BC = BoundaryCondition;

namespace {

constexpr double kPi = std::numbers::pi;

const std::pair<BC, BC> kPairs[] = {{BC::Dirichlet, BC::Dirichlet},
                                    {BC::Dirichlet, BC::Neumann},
                                    {BC::Neumann, BC::Dirichlet},
                                    {BC::Neumann, BC::Neumann}};

int first_index(const IntervalProblem& prob) {
  return prob.bc_left == BC::Neumann && prob.bc_right == BC::Neumann ? 2 : 1;
}

}  // namespace

TEST_CASE("linear eigenvalues") {
  const ModelParams p(1, 1.0);
  CHECK(linear_eigenvalue(1, IntervalProblem(kPi, BC::Dirichlet, BC::Dirichlet, p)) == doctest::Approx(1.0));
  CHECK(linear_eigenvalue(2, IntervalProblem(kPi, BC::Dirichlet, BC::Dirichlet, p)) == doctest::Approx(4.0));
  CHECK(linear_eigenvalue(1, IntervalProblem(1.0, BC::Dirichlet, BC::Neumann, p)) ==
        doctest::Approx(kPi * kPi / 4.0));
  CHECK(linear_eigenvalue(3, IntervalProblem(2.0, BC::Neumann, BC::Neumann, p)) == doctest::Approx(kPi * kPi));
  CHECK_THROWS_AS(linear_eigenvalue(1, IntervalProblem(1.0, BC::Neumann, BC::Neumann, p)), Error);
  CHECK_THROWS_AS(mu_of_alpha(1, 0.5, IntervalProblem(1.0, BC::Neumann, BC::Neumann, p)), Error);
}

TEST_CASE("small amplitude curves approach the linear eigenvalues") {
  for (double nu : {1.0, -1.0}) {
    const IntervalProblem prob(kPi, BC::Dirichlet, BC::Dirichlet, ModelParams(1, nu));
    for (int n = 1; n <= 5; ++n) {
      double prev = INFINITY;
      for (double alpha : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double err = std::abs(mu_of_alpha(n, alpha, prob) - n * n);
        CHECK(err < prev);
        prev = err;
      }
      CAPTURE(nu);
      CAPTURE(n);
      CHECK(prev <= 1e-2 * n * n);
    }
  }
}

TEST_CASE("Sturm oscillation, ordering and the level-set property") {
  const auto grid = log_grid(1e-3, 2.0, 12);
  for (int sigma : {1, 2}) {
    for (double nu : {1.0, -1.0}) {
      for (const auto& [l, r] : kPairs) {
        const IntervalProblem prob(1.7, l, r, ModelParams(sigma, nu));
        std::vector<CurveTrace> curves;
        for (int n = first_index(prob); n <= 8; ++n) {
          curves.push_back(trace_curve(n, grid, prob));
          const auto& c = curves.back();
          CAPTURE(sigma);
          CAPTURE(nu);
          CAPTURE(n);
          CHECK(c.failures.empty());
          for (const auto& s : c.samples) {
            CHECK(s.nodal_count == n - 1);
            CHECK(s.level_error <= 1e-10);
            CHECK(s.continuous);
          }
        }
        for (std::size_t k = 0; k + 1 < curves.size(); ++k)
          for (std::size_t i = 0; i < grid.size(); ++i) CHECK(curves[k].samples[i].mu < curves[k + 1].samples[i].mu);
      }
    }
  }
}

TEST_CASE("curves are monotone in alpha with sign set by nu") {
  const auto grid = log_grid(1e-3, 3.0, 30);
  for (double nu : {1.0, -1.0}) {
    const IntervalProblem prob(kPi, BC::Dirichlet, BC::Neumann, ModelParams(1, nu));
    for (int n = 1; n <= 4; ++n) {
      const auto c = trace_curve(n, grid, prob);
      REQUIRE(c.failures.empty());
      for (std::size_t i = 1; i < c.samples.size(); ++i) {
        if (nu > 0)
          CHECK(c.samples[i].mu < c.samples[i - 1].mu);
        else
          CHECK(c.samples[i].mu > c.samples[i - 1].mu);
      }
    }
  }
}

TEST_CASE("interval solutions satisfy both boundary conditions; oracle confirms zeros") {
  for (const auto& [l, r] : kPairs) {
    const IntervalProblem prob(2.3, l, r, ModelParams(1, 1.0));
    for (int n = first_index(prob); n <= 5; ++n) {
      const ParamPoint p = level_set_point(n, 0.8, prob);
      const auto sol = interval_solution(p, prob.params, l);
      const auto left = eval(sol, 0.0);
      const auto right = eval(sol, prob.length);
      const double slope = std::sqrt(energy_of(p, prob.params).h);
      CHECK(std::abs(l == BC::Dirichlet ? left.phi : left.dphi / slope) < 1e-8);
      CHECK(std::abs(r == BC::Dirichlet ? right.phi : right.dphi / slope) < 1e-8);
      // Oracle: integrate from the left end and count sign changes strictly inside.
      const oracle::IvpState start = l == BC::Dirichlet ? oracle::IvpState{0.0, 0.0, slope}
                                                        : oracle::IvpState{0.0, p.alpha, 0.0};
      const auto traj = oracle::integrate(start, prob.params, p.mu, prob.length);
      int zeros = 0;
      for (const auto& z : traj.zeros())
        if (z.x > 1e-6 && z.x < prob.length - 1e-6) ++zeros;
      CHECK(zeros == n - 1);
      CHECK(interval_nodal_count(p, prob) == n - 1);
    }
  }
}

TEST_CASE("boundary-hugging samples are reported, not guessed") {
  const IntervalProblem prob(kPi, BC::Dirichlet, BC::Dirichlet, ModelParams(1, 1.0));
  // lambda_1 = 2 pi needs mu within ~1e-13 relative of mu_0 at alpha = 10.
  try {
    level_set_point(1, 10.0, prob);
    FAIL("expected Unattainable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unattainable);
  }
  const ParamPoint p = level_set_point(1, 7.9, prob);
  CHECK(*p.boundary_gap / (7.9 * 7.9) < 1e-9);
  CHECK(std::abs(wavelength(p, prob.params).lambda - 2 * kPi) <= 1e-10 * 2 * kPi);
  CHECK(interval_nodal_count(p, prob) == 0);
  const auto trace = trace_curve(1, {5.0, 10.0}, prob);
  CHECK(trace.samples.size() == 1);
  REQUIRE(trace.failures.size() == 1);
  CHECK(trace.failures[0].alpha == 10.0);
}

TEST_CASE("sampling grids") {
  const auto g = log_grid(1e-4, 10.0, 50);
  REQUIRE(g.size() == 50);
  CHECK(g.front() == 1e-4);
  CHECK(g.back() == 10.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(1e5, 1.0 / 49)));
  const auto l = linear_grid(0.0, 1.0, 5);
  CHECK(l == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), Error);
  CHECK_THROWS_AS(linear_grid(1.0, 1.0, 5), Error);
  CHECK_THROWS_AS(log_grid(1.0, 2.0, 1), Error);
}
