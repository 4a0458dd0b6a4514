#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nls/model.hpp"

namespace nls::oracle {

// Independent check on every quadrature-based construction: the stationary
// equation is integrated directly as an initial value problem.

struct IvpState {
  double x = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
};

struct OracleOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  double initial_step = 1e-3;
  /// |phi| above this aborts with BlowUp; 0 selects 1e3 * max(|phi0|, |dphi0|, 1).
  double blowup_amplitude = 0.0;
  std::size_t max_steps = 20'000'000;
  /// x-resolution of event location.
  double event_tol = 1e-12;
};

struct Crossing {
  double x = 0.0;
  int direction = 0;  // +1 upward, -1 downward
};

class Trajectory {
 public:
  Trajectory(ModelParams params, double mu, OracleOptions options, std::vector<IvpState> knots);

  const std::vector<IvpState>& knots() const noexcept { return knots_; }
  double mu() const noexcept { return mu_; }
  double x_begin() const { return knots_.front().x; }
  double x_end() const { return knots_.back().x; }

  /// Dense output: one fresh high-order step from the nearest knot at or before x.
  IvpState state_at(double x) const;

  /// Sign changes of phi strictly after the initial point.
  std::vector<Crossing> zeros() const;

  /// Sign changes of dphi strictly after the initial point (turning values).
  std::vector<IvpState> turning_points() const;

  double energy(const IvpState& s) const;

  /// max |h(x) - h(x0)| / |h(x0)| over the knots.
  double max_energy_drift() const;

 private:
  double locate(std::size_t knot, bool derivative) const;

  ModelParams params_;
  double mu_;
  OracleOptions options_;
  std::vector<IvpState> knots_;
};

/// Stop predicate for march(): called with the previous and the newly accepted state.
using StopPredicate = std::function<bool(const IvpState& prev, const IvpState& cur)>;

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration of
///   phi'' = -mu phi - (sigma+1) nu phi^(2 sigma + 1)
/// from initial.x to x_end.
Trajectory integrate(const IvpState& initial, const ModelParams& params, double mu, double x_end,
                     OracleOptions options = {});

/// Integrates until stop returns true or x_limit is hit (NonConvergence).
Trajectory march(const IvpState& initial, const ModelParams& params, double mu, double x_limit,
                 const StopPredicate& stop, OracleOptions options = {});

/// Starting state of the oscillating solution of a P point at its zero:
/// (0, 0, sqrt(h)).
IvpState zero_crossing_start(const ParamPoint& point, const ModelParams& params);

/// Period measured as the first return to phi = 0 with positive slope.
double measure_period(const ParamPoint& point, const ModelParams& params, OracleOptions options = {});

/// Distance from the upward zero to the first point where phi = target, 0 < target < alpha.
double first_passage(const ParamPoint& point, const ModelParams& params, double target, OracleOptions options = {});

/// First turning value reached from the upward zero.
double first_turning_value(const ParamPoint& point, const ModelParams& params, OracleOptions options = {});

}  // namespace nls::oracle
