#include "nls/interval_spectrum.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nls/quadrature.hpp"
#include "nls/solution.hpp"

namespace nls {

namespace {

double required_wavelength(int n, const IntervalProblem& problem) {
  const auto lambda = target_wavelength(n, problem);
  if (!lambda) throw Error(ErrorKind::InvalidArgument, "n = 1 is not admissible for Neumann-Neumann");
  return *lambda;
}

// mu at the diverging end of f_alpha: mu_0 for nu > 0, mu_c for nu < 0.
double lower_boundary(double alpha, const ModelParams& params) {
  return params.nu > 0.0 ? mu_zero_boundary(alpha, params) : mu_critical_boundary(alpha, params);
}

ParamPoint point_at_gap(double boundary, double gap, double alpha, const ModelParams& params) {
  ParamPoint p = make_point(boundary + gap, alpha, params);
  p.boundary_gap = gap;
  return p;
}

}  // namespace

ParamPoint level_set_point(int n, double alpha, const IntervalProblem& problem) {
  const ModelParams& params = problem.params;
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
  const double target = required_wavelength(n, problem);
  const double boundary = lower_boundary(alpha, params);
  const double scale = std::abs(boundary);
  const auto lambda_at = [&](double gap) { return wavelength_value(point_at_gap(boundary, gap, alpha, params), params); };

  // lambda < 2 pi / sqrt(gap) on both signs of nu, so this gap is already too large.
  const double gap_hi = 1.01 * std::pow(2.0 * std::numbers::pi / target, 2) + (params.nu > 0.0 ? scale : 0.0);

  // Approach the diverging boundary until the wavelength exceeds the target.
  double gap_lo = params.nu > 0.0 ? std::max(1e-9, 1e-9 * scale) : 1e-9 * scale;
  double f_lo = lambda_at(gap_lo) - target;
  for (double rel : {1e-10, 1e-11, 1.0001e-12}) {
    if (f_lo > 0.0) break;
    if (rel * scale >= gap_lo) continue;
    gap_lo = rel * scale;
    f_lo = lambda_at(gap_lo) - target;
  }
  if (!(f_lo > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "wavelength " << target << " lies beyond the boundary guard at alpha=" << alpha;
    throw Error(ErrorKind::Unattainable, os.str());
  }
  const double f_hi = lambda_at(gap_hi) - target;
  if (gap_hi <= gap_lo || f_hi >= 0.0) throw Error(ErrorKind::NonConvergence, "failed to bracket the level set");

  std::uintmax_t max_iter = 200;
  const auto r = boost::math::tools::toms748_solve(
      [&](double gap) { return lambda_at(gap) - target; }, gap_lo, gap_hi, f_lo, f_hi,
      [](double a, double b) { return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::min(a, b); },
      max_iter);
  const double gap = std::abs(lambda_at(r.first) - target) <= std::abs(lambda_at(r.second) - target) ? r.first : r.second;
  const ParamPoint p = point_at_gap(boundary, gap, alpha, params);
  if (p.region == Region::Outside) throw Error(ErrorKind::RegionExit, "level set left the admissible region");
  if (!(std::abs(lambda_at(gap) - target) <= 1e-10 * target))
    throw Error(ErrorKind::NonConvergence, "level set not resolved to 1e-10");
  return p;
}

double mu_of_alpha(int n, double alpha, const IntervalProblem& problem) {
  return level_set_point(n, alpha, problem).mu;
}

int interval_nodal_count(const ParamPoint& point, const IntervalProblem& problem) {
  const LineSolution sol = interval_solution(point, problem.params, problem.bc_left);
  return count_interior_zeros(sol, 0.0, problem.length);
}

CurveTrace trace_curve(int n, const std::vector<double>& alpha_grid, const IntervalProblem& problem,
                       double continuity_factor) {
  for (std::size_t i = 1; i < alpha_grid.size(); ++i)
    if (!(alpha_grid[i] > alpha_grid[i - 1])) throw Error(ErrorKind::InvalidArgument, "alpha grid must increase strictly");
  const double target = required_wavelength(n, problem);
  CurveTrace out;
  double prev_alpha = 0.0, prev_mu = 0.0, prev_slope = 0.0;
  bool have_prev = false;
  for (double alpha : alpha_grid) {
    try {
      const ParamPoint p = level_set_point(n, alpha, problem);
      const auto w = wavelength(p, problem.params);
      CurveSample s;
      s.n = n;
      s.alpha = alpha;
      s.mu = p.mu;
      s.boundary_gap = *p.boundary_gap;
      s.level_error = std::abs(w.lambda - target) / target;
      s.nodal_count = interval_nodal_count(p, problem);
      if (have_prev)
        s.continuous = std::abs(s.mu - prev_mu) <= continuity_factor * (alpha - prev_alpha) * prev_slope;
      prev_alpha = alpha;
      prev_mu = s.mu;
      prev_slope = std::abs(w.d_alpha / w.d_mu);
      have_prev = true;
      out.samples.push_back(s);
    } catch (const Error& e) {
      out.failures.push_back({n, alpha, e.kind(), e.what()});
      have_prev = false;
    }
  }
  return out;
}

double linear_eigenvalue(int n, const IntervalProblem& problem) {
  const double lambda = required_wavelength(n, problem);
  return std::pow(2.0 * std::numbers::pi / lambda, 2);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw Error(ErrorKind::InvalidArgument, "log grid needs 0 < lo < hi, count >= 2");
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (!(hi > lo) || count < 2) throw Error(ErrorKind::InvalidArgument, "linear grid needs lo < hi, count >= 2");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

}  // namespace nls
