#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace nls {

enum class BoundaryCondition { Dirichlet, Neumann };

std::string_view to_string(BoundaryCondition bc);

/// Coefficients of  mu*phi = -phi'' - (sigma+1)*nu*phi^(2 sigma + 1).
/// mu is carried separately because it varies along spectral curves.
struct ModelParams {
  int sigma = 1;
  double nu = 1.0;

  ModelParams() = default;
  ModelParams(int sigma_, double nu_);
};

enum class Region { PPlusPlus, PPlusMinus, PMinus, Outside };

std::string_view to_string(Region region);

struct ParamPoint {
  double mu = 0.0;
  double alpha = 0.0;
  Region region = Region::Outside;
  /// Optional mu - mu_0 (nu > 0) or mu - mu_c (nu < 0), known to full relative
  /// precision. Used in place of the rounded difference when set.
  std::optional<double> boundary_gap;
};

struct EnergyLevel {
  double h = 0.0;
};

struct IntervalProblem {
  double length = 1.0;
  BoundaryCondition bc_left = BoundaryCondition::Dirichlet;
  BoundaryCondition bc_right = BoundaryCondition::Dirichlet;
  ModelParams params;

  IntervalProblem() = default;
  IntervalProblem(double length_, BoundaryCondition left, BoundaryCondition right, ModelParams p);
};

/// Star of degree d >= 3. Edge j runs from the central vertex (x = 0) to its
/// boundary vertex (x = edge_lengths[j]).
struct StarGraph {
  std::vector<double> edge_lengths;
  std::vector<BoundaryCondition> boundary_bcs;
  ModelParams params;

  StarGraph() = default;
  StarGraph(std::vector<double> lengths, std::vector<BoundaryCondition> bcs, ModelParams p);

  std::size_t degree() const noexcept { return edge_lengths.size(); }
};

// Region boundaries in the (mu, alpha) half plane.
double alpha_zero(double mu, const ModelParams& params);      // |mu/nu|^(1/2sigma)
double alpha_critical(double mu, const ModelParams& params);  // |mu/((sigma+1)nu)|^(1/2sigma)
double mu_zero_boundary(double alpha, const ModelParams& params);      // -|nu| alpha^(2sigma)
double mu_critical_boundary(double alpha, const ModelParams& params);  // (sigma+1)|nu| alpha^(2sigma)

/// Strict-inequality classification; boundary points fall into Outside.
Region classify_region(double mu, double alpha, const ModelParams& params);

/// Classified point; throws InvalidArgument for alpha <= 0.
ParamPoint make_point(double mu, double alpha, const ModelParams& params);

/// h = mu alpha^2 + nu alpha^(2(sigma+1)); rejects Outside points.
EnergyLevel energy_of(const ParamPoint& point, const ModelParams& params);

/// Potential value at its nonzero critical points, h_p(alpha_c). Bounds the
/// energy of oscillating solutions from above in P-minus.
double critical_energy(double mu, const ModelParams& params);

/// Wavelength an interval solution must have to fit the boundary conditions
/// with n - 1 interior zeros. Empty when n is not admissible (n = 1 for N-N).
std::optional<double> target_wavelength(int n, const IntervalProblem& problem);

// Shape of the effective potential mu phi^2 + nu phi^(2(sigma+1)).
enum class PotentialCase { I, II, III, IV };

PotentialCase potential_case(double mu, const ModelParams& params);

enum class OrbitKind {
  NoSolution,
  Constant,
  PeriodicWithZeros,
  PeriodicDefiniteSign,
  Soliton,
  Kink,
  Unbounded,
};

std::string_view to_string(OrbitKind kind);

/// Bounded orbit family at energy h (Unbounded only when none is bounded).
OrbitKind classify_orbit(double mu, double h, const ModelParams& params);

/// Squared turning values for sigma = 1:
///   beta_n^2 = -(1/2nu) [mu + (-1)^n (mu^2 + 4 h nu)^(1/2)],  n = 1, 2.
/// Returns nothing when the discriminant is negative.
std::optional<double> turning_value_squared_sigma1(int n, double mu, double h, double nu);

}  // namespace nls
