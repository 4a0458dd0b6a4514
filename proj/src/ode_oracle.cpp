#include "nls/ode_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "nls/error.hpp"

namespace nls::oracle {

namespace {

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

struct VectorField {
  double mu;
  ModelParams params;

  void operator()(const State& y, State& dydx, double /*x*/) const {
    const double phi = y[0];
    dydx[0] = y[1];
    dydx[1] = -mu * phi - (params.sigma + 1) * params.nu * std::pow(phi, 2 * params.sigma + 1);
  }
};

double blowup_threshold(const IvpState& s, const OracleOptions& o) {
  if (o.blowup_amplitude > 0.0) return o.blowup_amplitude;
  return 1e3 * std::max({std::abs(s.phi), std::abs(s.dphi), 1.0});
}

}  // namespace

Trajectory::Trajectory(ModelParams params, double mu, OracleOptions options, std::vector<IvpState> knots)
    : params_(params), mu_(mu), options_(options), knots_(std::move(knots)) {
  if (knots_.empty()) throw Error(ErrorKind::InvalidArgument, "trajectory needs at least one knot");
}

IvpState Trajectory::state_at(double x) const {
  if (x < x_begin() || x > x_end()) throw Error(ErrorKind::InvalidArgument, "dense output requested outside trajectory");
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x, [](double v, const IvpState& s) { return v < s.x; });
  const IvpState& k = *std::prev(it);
  const double dx = x - k.x;
  if (dx == 0.0) return k;
  odeint::runge_kutta_fehlberg78<State> stepper;
  State y{k.phi, k.dphi};
  stepper.do_step(VectorField{mu_, params_}, y, k.x, dx);
  return IvpState{x, y[0], y[1]};
}

double Trajectory::locate(std::size_t knot, bool derivative) const {
  const auto value = [&](double x) {
    const IvpState s = state_at(x);
    return derivative ? s.dphi : s.phi;
  };
  const double a = knots_[knot].x;
  const double b = knots_[knot + 1].x;
  const double fa = derivative ? knots_[knot].dphi : knots_[knot].phi;
  const double fb = derivative ? knots_[knot + 1].dphi : knots_[knot + 1].phi;
  if (fb == 0.0) return b;
  const double tol = options_.event_tol;
  std::uintmax_t max_iter = 200;
  const auto r = boost::math::tools::toms748_solve(
      value, a, b, fa, fb, [tol](double lo, double hi) { return std::abs(hi - lo) <= tol * std::max(1.0, std::abs(lo)); },
      max_iter);
  return 0.5 * (r.first + r.second);
}

std::vector<Crossing> Trajectory::zeros() const {
  std::vector<Crossing> out;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double a = knots_[i].phi;
    const double b = knots_[i + 1].phi;
    if (a == 0.0) continue;
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) out.push_back({locate(i, false), a < 0.0 ? +1 : -1});
  }
  return out;
}

std::vector<IvpState> Trajectory::turning_points() const {
  std::vector<IvpState> out;
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double a = knots_[i].dphi;
    const double b = knots_[i + 1].dphi;
    if (a == 0.0) continue;
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) out.push_back(state_at(locate(i, true)));
  }
  return out;
}

double Trajectory::energy(const IvpState& s) const {
  const double p2 = s.phi * s.phi;
  return s.dphi * s.dphi + mu_ * p2 + params_.nu * std::pow(p2, params_.sigma + 1);
}

double Trajectory::max_energy_drift() const {
  const double h0 = energy(knots_.front());
  const double scale = std::abs(h0) > 0.0 ? std::abs(h0) : 1.0;
  double worst = 0.0;
  for (const auto& k : knots_) worst = std::max(worst, std::abs(energy(k) - h0) / scale);
  return worst;
}

Trajectory march(const IvpState& initial, const ModelParams& params, double mu, double x_limit,
                 const StopPredicate& stop, OracleOptions options) {
  if (!std::isfinite(initial.phi) || !std::isfinite(initial.dphi) || !std::isfinite(mu))
    throw Error(ErrorKind::InvalidArgument, "non-finite initial data");
  const VectorField field{mu, params};
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(options.abs_tol, options.rel_tol);
  const double blowup = blowup_threshold(initial, options);

  std::vector<IvpState> knots{initial};
  State y{initial.phi, initial.dphi};
  double x = initial.x;
  double dx = options.initial_step;
  while (x < x_limit) {
    if (knots.size() > options.max_steps) throw Error(ErrorKind::NonConvergence, "oracle step budget exhausted");
    dx = std::min(dx, x_limit - x);
    // try_step advances (y, x) and adapts dx on success; on failure it only shrinks dx.
    if (stepper.try_step(field, y, x, dx) == odeint::fail) continue;
    if (!(std::abs(y[0]) <= blowup))
      throw Error(ErrorKind::BlowUp, "solution left the bounded family (|phi| exceeded threshold)");
    knots.push_back({x, y[0], y[1]});
    if (stop && stop(knots[knots.size() - 2], knots.back())) break;
  }
  return Trajectory(params, mu, options, std::move(knots));
}

Trajectory integrate(const IvpState& initial, const ModelParams& params, double mu, double x_end, OracleOptions options) {
  if (!(x_end >= initial.x)) throw Error(ErrorKind::InvalidArgument, "x_end precedes the initial point");
  return march(initial, params, mu, x_end, nullptr, options);
}

IvpState zero_crossing_start(const ParamPoint& point, const ModelParams& params) {
  const double h = energy_of(point, params).h;
  return IvpState{0.0, 0.0, std::sqrt(h)};
}

namespace {

constexpr double kSearchLimit = 1e12;

OracleOptions with_blowup(OracleOptions options, double alpha) {
  if (options.blowup_amplitude <= 0.0) options.blowup_amplitude = 1e3 * alpha;
  return options;
}

}  // namespace

double measure_period(const ParamPoint& point, const ModelParams& params, OracleOptions options) {
  options = with_blowup(options, point.alpha);
  const auto traj = march(
      zero_crossing_start(point, params), params, point.mu, kSearchLimit,
      [](const IvpState& prev, const IvpState& cur) { return prev.phi < 0.0 && cur.phi >= 0.0; }, options);
  const auto zs = traj.zeros();
  for (const auto& z : zs)
    if (z.direction > 0) return z.x;
  throw Error(ErrorKind::NonConvergence, "no return to the upward zero");
}

double first_passage(const ParamPoint& point, const ModelParams& params, double target, OracleOptions options) {
  if (!(target > 0.0 && target < point.alpha)) throw Error(ErrorKind::InvalidArgument, "target must lie in (0, alpha)");
  options = with_blowup(options, point.alpha);
  const auto traj = march(
      zero_crossing_start(point, params), params, point.mu, kSearchLimit,
      [target](const IvpState&, const IvpState& cur) { return cur.phi >= target || cur.dphi <= 0.0; }, options);
  const auto& ks = traj.knots();
  const std::size_t i = ks.size() - 2;
  if (ks.back().phi < target) throw Error(ErrorKind::NonConvergence, "turning point reached before target");
  const double tol = options.event_tol;
  std::uintmax_t max_iter = 200;
  const auto r = boost::math::tools::toms748_solve(
      [&](double x) { return traj.state_at(x).phi - target; }, ks[i].x, ks[i + 1].x, ks[i].phi - target,
      ks[i + 1].phi - target, [tol](double lo, double hi) { return std::abs(hi - lo) <= tol * std::max(1.0, lo); },
      max_iter);
  return 0.5 * (r.first + r.second);
}

double first_turning_value(const ParamPoint& point, const ModelParams& params, OracleOptions options) {
  options = with_blowup(options, point.alpha);
  const auto traj = march(
      zero_crossing_start(point, params), params, point.mu, kSearchLimit,
      [](const IvpState&, const IvpState& cur) { return cur.dphi <= 0.0; }, options);
  const auto turns = traj.turning_points();
  if (turns.empty()) throw Error(ErrorKind::NonConvergence, "no turning point located");
  return turns.front().phi;
}

}  // namespace nls::oracle
