#pragma once

#include <string>
#include <vector>

#include "nls/error.hpp"
#include "nls/model.hpp"

namespace nls {

/// Point (mu, alpha) on the n-th spectral curve: wavelength(mu, alpha) equals
/// target_wavelength(n). The returned point carries its boundary gap.
/// Throws Unattainable when the target lies beyond the boundary guard and
/// InvalidArgument for the excluded N-N index n = 1.
ParamPoint level_set_point(int n, double alpha, const IntervalProblem& problem);

/// mu component of level_set_point.
double mu_of_alpha(int n, double alpha, const IntervalProblem& problem);

/// Interior zeros of the interval solution at a point, counted on (0, l).
int interval_nodal_count(const ParamPoint& point, const IntervalProblem& problem);

struct CurveSample {
  int n = 1;
  double alpha = 0.0;
  double mu = 0.0;
  int nodal_count = 0;
  double boundary_gap = 0.0;
  /// |lambda - lambda_n| / lambda_n at the sample.
  double level_error = 0.0;
  /// |d mu| within the continuity bound relative to the previous sample.
  bool continuous = true;
};

struct CurveFailure {
  int n = 1;
  double alpha = 0.0;
  ErrorKind kind = ErrorKind::Unattainable;
  std::string message;
};

struct CurveTrace {
  std::vector<CurveSample> samples;
  std::vector<CurveFailure> failures;
};

/// Samples gamma_n on a strictly increasing alpha grid. Consecutive samples
/// must satisfy |d mu| <= continuity_factor |d alpha| |d_alpha lambda / d_mu lambda|
/// evaluated at the earlier one.
CurveTrace trace_curve(int n, const std::vector<double>& alpha_grid, const IntervalProblem& problem,
                       double continuity_factor = 10.0);

/// count points from lo to hi, geometric (log_grid) or evenly spaced (linear_grid).
std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);

/// (2 pi / lambda_n)^2, the n-th eigenvalue of the linear problem on the curve's index set.
double linear_eigenvalue(int n, const IntervalProblem& problem);

}  // namespace nls
