#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nls/model.hpp"
#include "nls/solution.hpp"

namespace nls {

/// q = (mu, alpha_1, ..., alpha_d) with the frozen branch sign of each edge
/// (EdgeBranch::zeta convention: sign at the boundary vertex).
struct StarPoint {
  double mu = 0.0;
  std::vector<double> alphas;
  std::vector<int> zetas;
};

/// Per-edge branch data for q on graph. Throws on size mismatch.
std::vector<EdgeBranch> branches(const StarPoint& q, const StarGraph& graph);

/// Kirchhoff sum and continuity gaps phi_j(0) - phi_1(0), j = 2..d.
struct ResidualVector {
  double n1 = 0.0;
  std::vector<double> nj;
};

ResidualVector residual(const StarPoint& q, const StarGraph& graph);

/// max(|n1| / max_j sqrt(h_j), max_j |nj| / max_j alpha_j).
double residual_norm(const StarPoint& q, const StarGraph& graph);

/// Analytic derivatives of one edge's central values at a central zero.
struct RayVariation {
  double dphi_dmu = 0.0;     // d phi(0) / d mu
  double dslope_dmu = 0.0;   // d phi'(0) / d mu
  double dphi_dalpha = 0.0;  // d phi(0) / d alpha
  double dslope_dalpha = 0.0;
};

/// Requires edge_trace(branch).central_zero. zeta in the formulas is the sign
/// of phi'(0), xi = l / lambda.
RayVariation ray_variation(const EdgeBranch& branch, const ModelParams& params);

struct JacobianResult {
  Eigen::MatrixXd matrix;  // dN_i / d alpha_k at fixed mu
  bool analytic = false;   // every edge has a zero at the central vertex
  double condition = 0.0;  // 2-norm condition number estimate
  bool ill_conditioned = false;
};

inline constexpr double kConditionLimit = 1e12;

JacobianResult jacobian(const StarPoint& q, const StarGraph& graph);

/// Central-difference Jacobian with step 1e-6 max(1, alpha_k).
Eigen::MatrixXd jacobian_fd(const StarPoint& q, const StarGraph& graph);

/// dN / d mu at fixed alphas (analytic at a central zero, otherwise central differences).
Eigen::VectorXd mu_derivative(const StarPoint& q, const StarGraph& graph);

/// Block structure of the analytic Jacobian at a central zero.
struct SchurReport {
  double a = 0.0;
  std::vector<double> b, c, d;  // j = 2..d
  double det_direct = 0.0;
  double det_schur = 0.0;  // prod d_jj * (a - sum b_j c_j / d_jj)
  double s_sum = 0.0;      // sum_j t_j / (xi_j alpha_j d_alpha lambda_j)
  double s_direct = 0.0;   // sum_j (d slope_j / d alpha_j) / (d phi_j / d alpha_j)
  double det_from_s = 0.0;  // prod_j (d phi_j / d alpha_j) * s_direct
  std::vector<double> t;
};

SchurReport schur_report(const StarPoint& q, const StarGraph& graph);

/// t_j = [mu + (sigma+1) nu alpha^(2 sigma)] / (mu + nu alpha^(2 sigma)).
double t_factor(double mu, double alpha, const ModelParams& params);

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
  int max_halvings = 10;
};

/// Damped Newton on the alphas at mu = fixed_mu. Throws NonConvergence,
/// SingularJacobian or RegionExit with the branch data in the message.
StarPoint newton_solve(const StarPoint& q0, const StarGraph& graph, double fixed_mu, NewtonOptions options = {});

struct LocalCurvePoint {
  StarPoint q;
  double central_value = 0.0;
  int nodal_count = 0;
  double residual_norm = 0.0;
};

/// phi(0) from edge 1 (the continuity residual bounds the spread across edges).
double central_value(const StarPoint& q, const StarGraph& graph);

/// Interior zeros over the open edges plus one for a zero at the central vertex.
int count_star_nodes(const StarPoint& q, const StarGraph& graph);

LocalCurvePoint make_curve_point(const StarPoint& q, const StarGraph& graph);

struct ContinuationResult {
  std::vector<LocalCurvePoint> points;  // starts with q_start
  bool completed = false;
  double reached_mu = 0.0;
  std::string message;
};

/// Continuation in mu from q_start.mu to mu_end in `steps` equal steps with a
/// tangent predictor and newton_solve as corrector. Failed steps are halved
/// down to |mu_end - mu_start| / (steps 2^10).
ContinuationResult continue_curve(const StarPoint& q_start, const StarGraph& graph, double mu_end, int steps,
                                  NewtonOptions options = {});

/// s^2 [-1 + d/2 - s/2 sum_j slope_signs_j] for s = sgn phi_q(0).
int predict_nodal_change(int central_sign, const std::vector<int>& slope_signs);

/// Same formula with s and the slope signs read from q and q_star.
/// Throws ConditionViolated when q_star has no central zero.
int predict_nodal_change(const StarPoint& q, const StarPoint& q_star, const StarGraph& graph);

/// Relative threshold below which phi(0) counts as zero in sign tests.
inline constexpr double kCentralZeroTolerance = 1e-9;

}  // namespace nls
