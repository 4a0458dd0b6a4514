#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nls/model.hpp"
#include "nls/star_solver.hpp"

namespace nls {

using Rational = boost::multiprecision::cpp_rational;

/// Star whose solution at mu = 0 vanishes at the central vertex. zetas are the
/// slope signs at the center; m_j = n_j (Dirichlet) or n_j - 1/2 (Neumann).
struct StarConfig {
  int d = 3;
  int sigma = 1;
  double nu = 1.0;
  std::vector<int> zetas;
  std::vector<int> ns;
  std::vector<double> lengths;
  std::vector<BoundaryCondition> bcs;
  /// Exact m_j / l_j when the lengths come from rational data.
  std::optional<std::vector<Rational>> exact_rates;
};

/// Builds a config from rates r_j = m_j / l_j, so l_j = m_j / r_j.
StarConfig config_from_rates(int sigma, double nu, const std::vector<int>& zetas, const std::vector<Rational>& rates,
                             std::vector<int> ns = {}, std::vector<BoundaryCondition> bcs = {});

double half_wave_count(const StarConfig& config, std::size_t j);  // m_j

struct ConditionCheck {
  bool holds = false;
  bool exact = false;  // decided in rational arithmetic
  double value = 0.0;  // the sum in floating point
  double scale = 0.0;  // largest |term|
};

/// sum_j zeta_j (m_j / l_j)^(1 + 1/sigma) = 0
ConditionCheck vanishing_condition(const StarConfig& config);

/// sum_j zeta_j (m_j / l_j)^(-1 + 1/sigma) != 0
ConditionCheck sign_change_condition(const StarConfig& config);

StarGraph graph_of(const StarConfig& config);

/// q* at mu = 0 with alpha_j = (2 c1 nu^(-1/2) m_j / l_j)^(1/sigma). Throws
/// ConditionViolated when the vanishing condition fails or nu <= 0.
StarPoint build_qstar(const StarConfig& config);

/// First hit over sign vectors (last entry varying fastest) and then rate
/// vectors in lexicographic order with entries in 1..search_bound. For
/// sigma > 1 the last rate is solved for in floating point. All n_j = 1,
/// all edges Dirichlet.
std::optional<StarConfig> find_config(int sigma, int d, int search_bound);

/// Same search restricted to one sign vector.
std::optional<StarConfig> find_config(int sigma, int d, int search_bound,
                                      const std::optional<std::vector<int>>& fixed_zetas);

struct ViolationReport {
  StarConfig config;
  StarPoint q_star;
  double delta_mu = 0.0;
  int z_star = 0;
  int z_plus = 0;
  int z_minus = 0;
  int measured_change = 0;  // |Z+ - Z-|
  int zeta_sum = 0;         // |sum zeta_j|
  double central_plus = 0.0;
  double central_minus = 0.0;
  int predicted_plus = 0;  // Z(q+) - Z(q*) from the nodal-change formula
  int predicted_minus = 0;
  double residual_star = 0.0;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  double flux_prefactor = 0.0;  // see flux_prefactor()
  bool sign_flip = false;
  bool change_matches = false;      // measured_change == zeta_sum
  bool prediction_matches = false;  // predicted changes equal the counted ones
};

/// 1 - (1 + 1/sigma) c3: the factor multiplying the sign-change sum in the
/// mu-derivative of the Kirchhoff sum along the curve at q*. It vanishes for
/// sigma = 2 (c3 = 2/3), where the central value no longer changes sign to
/// first order.
double flux_prefactor(const ModelParams& params);

/// Continues from q* to mu = +delta and mu = -delta. delta_mu <= 0 selects
/// 1e-3 min_j nu alpha_j^(2 sigma). delta is halved when a side fails.
ViolationReport demonstrate_violation(const StarConfig& config, double delta_mu = 0.0);

std::string to_json(const ViolationReport& report);

/// Star solution through a central zero at arbitrary mu: alphas for edges
/// 1..d-1 are given, alpha_d is solved from the Kirchhoff condition and the
/// lengths are set to m_j lambda_j / 2. center_zetas has d - 1 entries; the
/// last slope sign is implied.
struct CentralZeroStar {
  StarGraph graph;
  StarPoint q;
  std::vector<int> center_zetas;  // d entries
};

CentralZeroStar central_zero_star(double mu, const std::vector<double>& head_alphas,
                                  const std::vector<int>& center_zetas, const std::vector<int>& ns,
                                  const std::vector<BoundaryCondition>& bcs, const ModelParams& params);

}  // namespace nls
