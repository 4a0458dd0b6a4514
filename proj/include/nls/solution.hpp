#pragma once

#include "nls/model.hpp"

namespace nls {

/// Oscillating solution on the line, stored as phase data. phi(offset) = 0
/// with slope of sign `sign`; phi has period `lambda` and amplitude alpha.
struct LineSolution {
  ParamPoint point;
  ModelParams params;
  int sign = 1;
  double offset = 0.0;
  double lambda = 0.0;
};

/// Computes and caches the wavelength. Rejects Outside points and sign not in {-1, +1}.
LineSolution make_line_solution(const ParamPoint& point, const ModelParams& params, int sign, double offset);

/// x(phi_hat) = int_0^phi_hat [h - mu w^2 - nu w^(2(sigma+1))]^(-1/2) dw for 0 <= phi_hat <= alpha.
double quarter_inverse(double phi_hat, const ParamPoint& point, const ModelParams& params);

struct SolutionValue {
  double phi = 0.0;
  double dphi = 0.0;
};

SolutionValue eval(const LineSolution& sol, double x);

/// Zeros strictly inside (a, b). Zeros within 1e-9 max(1, |u|) half-waves of an
/// endpoint at phase u are treated as endpoint zeros and excluded.
int count_interior_zeros(const LineSolution& sol, double a, double b);

/// True when x is a zero of the lattice within the same tolerance.
bool zero_at(const LineSolution& sol, double x);

/// Interval solution on [0, l] fitted to the left boundary condition:
/// Dirichlet starts at a zero, Neumann at a maximum.
LineSolution interval_solution(const ParamPoint& point, const ModelParams& params, BoundaryCondition left);

/// One edge of a star, x = 0 at the central vertex and x = edge_length at the
/// boundary vertex. zeta is the sign of phi'(l) (Dirichlet) or phi(l) (Neumann).
struct EdgeBranch {
  ParamPoint point;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  int zeta = 1;
  double edge_length = 1.0;
};

/// Solution on the edge, pinned at the boundary vertex.
LineSolution edge_solution(const EdgeBranch& branch, const ModelParams& params);

struct EdgeTrace {
  double phi0 = 0.0;
  double dphi0 = 0.0;
  double xi = 0.0;              // l / lambda
  bool quarter_integer = false;  // 4 xi is an integer to 1e-9 relative
  bool central_zero = false;     // quarter_integer and the lattice puts a zero at x = 0
  int quarter_count = 0;         // round(4 xi) when quarter_integer
  double lambda = 0.0;
};

EdgeTrace edge_trace(const EdgeBranch& branch, const ModelParams& params);

/// Relative tolerance on 4 xi for quarter-integer detection.
inline constexpr double kQuarterTolerance = 1e-9;

}  // namespace nls
