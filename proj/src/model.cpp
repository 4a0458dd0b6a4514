#include "nls/model.hpp"

#include <cmath>
#include <string>

#include "nls/error.hpp"

namespace nls {

std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::PPlusPlus: return "P++";
    case Region::PPlusMinus: return "P+-";
    case Region::PMinus: return "P-";
    case Region::Outside: return "outside";
  }
  return "outside";
}

std::string_view to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::NoSolution: return "none";
    case OrbitKind::Constant: return "constant";
    case OrbitKind::PeriodicWithZeros: return "periodic-with-zeros";
    case OrbitKind::PeriodicDefiniteSign: return "periodic-definite-sign";
    case OrbitKind::Soliton: return "soliton";
    case OrbitKind::Kink: return "kink";
    case OrbitKind::Unbounded: return "unbounded";
  }
  return "none";
}

ModelParams::ModelParams(int sigma_, double nu_) : sigma(sigma_), nu(nu_) {
  if (sigma < 1) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 1");
  if (!(nu != 0.0) || !std::isfinite(nu)) throw Error(ErrorKind::InvalidArgument, "nu must be finite and nonzero");
}

IntervalProblem::IntervalProblem(double length_, BoundaryCondition left, BoundaryCondition right, ModelParams p)
    : length(length_), bc_left(left), bc_right(right), params(p) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(ErrorKind::InvalidArgument, "interval length must be positive");
}

StarGraph::StarGraph(std::vector<double> lengths, std::vector<BoundaryCondition> bcs, ModelParams p)
    : edge_lengths(std::move(lengths)), boundary_bcs(std::move(bcs)), params(p) {
  if (edge_lengths.size() < 3) throw Error(ErrorKind::InvalidArgument, "star graph needs degree d >= 3");
  if (boundary_bcs.size() != edge_lengths.size())
    throw Error(ErrorKind::InvalidArgument, "one boundary condition per edge is required");
  for (double l : edge_lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::InvalidArgument, "edge lengths must be positive");
}

double alpha_zero(double mu, const ModelParams& params) {
  return std::pow(std::abs(mu / params.nu), 1.0 / (2.0 * params.sigma));
}

double alpha_critical(double mu, const ModelParams& params) {
  return std::pow(std::abs(mu / ((params.sigma + 1) * params.nu)), 1.0 / (2.0 * params.sigma));
}

double mu_zero_boundary(double alpha, const ModelParams& params) {
  return -std::abs(params.nu) * std::pow(alpha, 2 * params.sigma);
}

double mu_critical_boundary(double alpha, const ModelParams& params) {
  return (params.sigma + 1) * std::abs(params.nu) * std::pow(alpha, 2 * params.sigma);
}

Region classify_region(double mu, double alpha, const ModelParams& params) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
  if (params.nu > 0.0) {
    if (mu > 0.0) return Region::PPlusPlus;
    if (alpha > alpha_zero(mu, params)) return Region::PPlusMinus;
    return Region::Outside;
  }
  if (mu > 0.0 && alpha < alpha_critical(mu, params)) return Region::PMinus;
  return Region::Outside;
}

ParamPoint make_point(double mu, double alpha, const ModelParams& params) {
  return ParamPoint{mu, alpha, classify_region(mu, alpha, params), std::nullopt};
}

EnergyLevel energy_of(const ParamPoint& point, const ModelParams& params) {
  if (point.region == Region::Outside)
    throw Error(ErrorKind::OutsideRegion, "energy requested for a point outside P");
  const double a2 = point.alpha * point.alpha;
  return EnergyLevel{point.mu * a2 + params.nu * std::pow(a2, params.sigma + 1)};
}

double critical_energy(double mu, const ModelParams& params) {
  const double ac2 = std::pow(alpha_critical(mu, params), 2);
  return mu * ac2 + params.nu * std::pow(ac2, params.sigma + 1);
}

std::optional<double> target_wavelength(int n, const IntervalProblem& problem) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "curve index n must be >= 1");
  const double l = problem.length;
  const bool left_d = problem.bc_left == BoundaryCondition::Dirichlet;
  const bool right_d = problem.bc_right == BoundaryCondition::Dirichlet;
  if (left_d && right_d) return 2.0 * l / n;
  if (left_d != right_d) return 4.0 * l / (2.0 * n - 1.0);
  // Both Neumann: n - 1 interior zeros need n - 1 half waves.
  if (n == 1) return std::nullopt;
  return 2.0 * l / (n - 1.0);
}

PotentialCase potential_case(double mu, const ModelParams& params) {
  if (params.nu > 0.0) return mu >= 0.0 ? PotentialCase::I : PotentialCase::II;
  return mu >= 0.0 ? PotentialCase::III : PotentialCase::IV;
}

OrbitKind classify_orbit(double mu, double h, const ModelParams& params) {
  switch (potential_case(mu, params)) {
    case PotentialCase::I:
      if (h < 0.0) return OrbitKind::NoSolution;
      if (h == 0.0) return OrbitKind::Constant;
      return OrbitKind::PeriodicWithZeros;
    case PotentialCase::II: {
      const double hc = critical_energy(mu, params);
      if (h < hc) return OrbitKind::NoSolution;
      if (h == hc) return OrbitKind::Constant;
      if (h < 0.0) return OrbitKind::PeriodicDefiniteSign;
      if (h == 0.0) return OrbitKind::Soliton;
      return OrbitKind::PeriodicWithZeros;
    }
    case PotentialCase::III: {
      const double hc = critical_energy(mu, params);
      if (h < 0.0) return OrbitKind::Unbounded;
      if (h == 0.0) return OrbitKind::Constant;
      if (h < hc) return OrbitKind::PeriodicWithZeros;
      if (h == hc) return OrbitKind::Kink;
      return OrbitKind::Unbounded;
    }
    case PotentialCase::IV:
      if (h == 0.0) return OrbitKind::Constant;
      return OrbitKind::Unbounded;
  }
  return OrbitKind::NoSolution;
}

std::optional<double> turning_value_squared_sigma1(int n, double mu, double h, double nu) {
  if (n != 1 && n != 2) throw Error(ErrorKind::InvalidArgument, "turning value index must be 1 or 2");
  const double disc = mu * mu + 4.0 * h * nu;
  if (disc < 0.0) return std::nullopt;
  const double sign = n == 1 ? -1.0 : 1.0;
  return -(mu + sign * std::sqrt(disc)) / (2.0 * nu);
}

}  // namespace nls
