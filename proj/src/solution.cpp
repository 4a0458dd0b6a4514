#include "nls/solution.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "nls/error.hpp"
#include "nls/quadrature.hpp"

namespace nls {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Inverts the phase integral X(theta) = r on [0, pi/2]; X' = g^(-1/2) > 0.
double phase_inverse(const KappaFactor& g, double r, double quarter) {
  if (r <= 0.0) return 0.0;
  if (r >= quarter) return kHalfPi;
  const auto f = [&](double theta) {
    return std::pair<double, double>{phase_integral(g, theta) - r, 1.0 / std::sqrt(g(theta))};
  };
  std::uintmax_t max_iter = 100;
  return boost::math::tools::newton_raphson_iterate(f, kHalfPi * r / quarter, 0.0, kHalfPi, 45, max_iter);
}

}  // namespace

LineSolution make_line_solution(const ParamPoint& point, const ModelParams& params, int sign, double offset) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "solution sign must be +1 or -1");
  if (!std::isfinite(offset)) throw Error(ErrorKind::InvalidArgument, "non-finite phase offset");
  return LineSolution{point, params, sign, offset, wavelength_value(point, params)};
}

double quarter_inverse(double phi_hat, const ParamPoint& point, const ModelParams& params) {
  if (!(phi_hat >= 0.0 && phi_hat <= point.alpha))
    throw Error(ErrorKind::InvalidArgument, "phi_hat must lie in [0, alpha]");
  const KappaFactor g(point, params);
  return phase_integral(g, std::asin(std::min(1.0, phi_hat / point.alpha)));
}

SolutionValue eval(const LineSolution& sol, double x) {
  const KappaFactor g(sol.point, sol.params);
  const double lambda = sol.lambda;
  const double quarter = 0.25 * lambda;
  double s = std::fmod(x - sol.offset, lambda);
  if (s < 0.0) s += lambda;
  const int segment = std::clamp(static_cast<int>(s / quarter), 0, 3);
  const double r = s - segment * quarter;
  // Segments 1 and 3 run the quarter wave backwards.
  const bool reflected = segment == 1 || segment == 3;
  const double theta = phase_inverse(g, reflected ? quarter - r : r, quarter);
  const double alpha = sol.point.alpha;
  double phi = alpha * std::sin(theta);
  double dphi = alpha * std::cos(theta) * std::sqrt(g(theta));
  if (reflected) dphi = -dphi;
  if (segment >= 2) {
    phi = -phi;
    dphi = -dphi;
  }
  return {sol.sign * phi, sol.sign * dphi};
}

namespace {

constexpr double kLatticeTolerance = 1e-9;

double half_waves(const LineSolution& sol, double x) { return (x - sol.offset) / (0.5 * sol.lambda); }

double lattice_tolerance(double u) { return kLatticeTolerance * std::max(1.0, std::abs(u)); }

}  // namespace

int count_interior_zeros(const LineSolution& sol, double a, double b) {
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "count_interior_zeros needs a < b");
  const double ua = half_waves(sol, a);
  const double ub = half_waves(sol, b);
  const double lo = std::floor(ua + lattice_tolerance(ua)) + 1.0;
  const double hi = std::ceil(ub - lattice_tolerance(ub)) - 1.0;
  return hi >= lo ? static_cast<int>(hi - lo + 1.0) : 0;
}

bool zero_at(const LineSolution& sol, double x) {
  const double u = half_waves(sol, x);
  return std::abs(u - std::round(u)) <= lattice_tolerance(u);
}

LineSolution interval_solution(const ParamPoint& point, const ModelParams& params, BoundaryCondition left) {
  LineSolution sol = make_line_solution(point, params, 1, 0.0);
  if (left == BoundaryCondition::Neumann) sol.offset = -0.25 * sol.lambda;
  return sol;
}

LineSolution edge_solution(const EdgeBranch& branch, const ModelParams& params) {
  if (!(branch.edge_length > 0.0)) throw Error(ErrorKind::InvalidArgument, "edge length must be positive");
  LineSolution sol = make_line_solution(branch.point, params, branch.zeta, branch.edge_length);
  if (branch.bc == BoundaryCondition::Neumann) sol.offset -= 0.25 * sol.lambda;
  return sol;
}

EdgeTrace edge_trace(const EdgeBranch& branch, const ModelParams& params) {
  const LineSolution sol = edge_solution(branch, params);
  const SolutionValue v = eval(sol, 0.0);
  EdgeTrace out;
  out.phi0 = v.phi;
  out.dphi0 = v.dphi;
  out.lambda = sol.lambda;
  out.xi = branch.edge_length / sol.lambda;
  const double four_xi = 4.0 * out.xi;
  const double k = std::round(four_xi);
  out.quarter_integer = k >= 1.0 && std::abs(four_xi - k) <= kQuarterTolerance * std::max(1.0, four_xi);
  if (out.quarter_integer) {
    out.quarter_count = static_cast<int>(k);
    const bool even = out.quarter_count % 2 == 0;
    out.central_zero = branch.bc == BoundaryCondition::Dirichlet ? even : !even;
  }
  return out;
}

}  // namespace nls
