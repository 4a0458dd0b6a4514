#include "nls/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "nls/error.hpp"
#include "nls/interval_spectrum.hpp"
#include "nls/ode_oracle.hpp"
#include "nls/quadrature.hpp"
#include "nls/solution.hpp"
#include "nls/star_solver.hpp"

namespace nls::verify {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Tracks the worst value of a test statistic and the number of failures.
struct Tally {
  int samples = 0;
  int failures = 0;
  double worst = 0.0;

  void record(bool ok, double stat = 0.0) {
    ++samples;
    if (!ok) ++failures;
    worst = std::max(worst, stat);
  }
};

CheckResult result(const Check& c, bool pass, const std::string& detail) { return {c.id, c.title, pass, detail, 0.0}; }

StarConfig pythagorean() { return config_from_rates(1, 1.0, {1, 1, -1}, {3, 4, 5}); }

std::vector<CentralZeroStar> sample_stars(unsigned seed, int per_region) {
  std::mt19937 rng(seed);
  std::vector<CentralZeroStar> out;
  for (int region = 0; region < 3; ++region)
    for (int i = 0; i < per_region; ++i) out.push_back(random_central_zero_star(rng, region));
  return out;
}

struct RegionSample {
  ParamPoint point;
  ModelParams params;
};

// Fixed spread of points over the three regions for sigma = 1..3.
std::vector<RegionSample> region_samples() {
  std::vector<RegionSample> out;
  for (int sigma = 1; sigma <= 3; ++sigma) {
    const ModelParams pos(sigma, 1.0), neg(sigma, -1.0);
    for (double mu : {0.3, 1.0, 4.0})
      for (double a : {0.3, 1.0}) out.push_back({make_point(mu, a, pos), pos});
    for (double mu : {-1.0, -0.2})
      for (double f : {1.2, 2.0}) out.push_back({make_point(mu, f * alpha_zero(mu, pos), pos), pos});
    for (double mu : {0.5, 2.0})
      for (double f : {0.3, 0.8}) out.push_back({make_point(mu, f * alpha_critical(mu, neg), neg), neg});
  }
  return out;
}

// ---- acceptance criteria ----

CheckResult linear_limit(const Check& c) {
  Tally t;
  for (double nu : {1.0, -1.0}) {
    const IntervalProblem prob(M_PI, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet, ModelParams(1, nu));
    for (int n = 1; n <= 5; ++n) {
      const double err = std::abs(mu_of_alpha(n, 1e-4, prob) - n * n) / (n * n);
      t.record(err <= 1e-2, err);
    }
  }
  return result(c, t.failures == 0, std::to_string(t.samples) + " curves, worst relative error " + fmt(t.worst));
}

CheckResult sturm_oscillation(const Check& c) {
  const std::vector<double> grid = log_grid(1e-3, 1.5, 50);
  const std::pair<BoundaryCondition, BoundaryCondition> pairs[] = {
      {BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet},
      {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann},
      {BoundaryCondition::Neumann, BoundaryCondition::Neumann}};
  int samples = 0, count_errors = 0, order_errors = 0, solver_failures = 0;
  for (int sigma : {1, 2}) {
    for (double nu : {1.0, -1.0}) {
      for (const auto& [left, right] : pairs) {
        const IntervalProblem prob(M_PI, left, right, ModelParams(sigma, nu));
        std::vector<std::vector<double>> mus;
        for (int n = 1; n <= 8; ++n) {
          if (!target_wavelength(n, prob)) continue;
          const CurveTrace tr = trace_curve(n, grid, prob);
          solver_failures += static_cast<int>(tr.failures.size());
          std::vector<double> row(grid.size(), NAN);
          for (const auto& s : tr.samples) {
            ++samples;
            if (s.nodal_count != n - 1) ++count_errors;
            row[std::find(grid.begin(), grid.end(), s.alpha) - grid.begin()] = s.mu;
          }
          mus.push_back(row);
        }
        for (std::size_t k = 1; k < mus.size(); ++k)
          for (std::size_t i = 0; i < grid.size(); ++i)
            if (!(mus[k][i] > mus[k - 1][i])) ++order_errors;
      }
    }
  }
  const bool pass = count_errors == 0 && order_errors == 0 && solver_failures == 0;
  return result(c, pass,
                std::to_string(samples) + " samples (sigma 1-2, nu +-1, DD/DN/NN, n <= 8, 50 alphas in [1e-3, 1.5]); " +
                    std::to_string(count_errors) + " count errors, " + std::to_string(order_errors) +
                    " ordering errors, " + std::to_string(solver_failures) + " solver failures");
}

CheckResult oracle_equivalence(const Check& c) {
  Tally t;
  int per_region[3] = {0, 0, 0};
  for (const auto& s : region_samples()) {
    const double err = rel(oracle::measure_period(s.point, s.params), wavelength_value(s.point, s.params));
    t.record(err <= 1e-6, err);
    ++per_region[static_cast<int>(s.point.region)];
  }
  const bool pass = t.failures == 0 && t.samples >= 20 && per_region[0] > 0 && per_region[1] > 0 && per_region[2] > 0;
  return result(c, pass,
                std::to_string(t.samples) + " points (" + std::to_string(per_region[0]) + "/" +
                    std::to_string(per_region[1]) + "/" + std::to_string(per_region[2]) +
                    " per region), worst relative difference " + fmt(t.worst));
}

CheckResult mu_zero_forms(const Check& c) {
  Tally t;
  for (int sigma = 1; sigma <= 3; ++sigma) {
    for (double nu : {0.5, 1.0, 2.0}) {
      const ModelParams p(sigma, nu);
      for (double a : {0.5, 1.0, 2.0}) {
        const ParamPoint pt = make_point(1e-12, a, p);
        const WavelengthResult w = wavelength(pt, p);
        const MuZeroWavelength z = mu_zero_wavelength(a, p);
        const double e = std::max({rel(w.lambda, z.lambda), rel(w.d_alpha, z.d_alpha), rel(w.d_mu, z.d_mu)});
        t.record(e <= 1e-8, e);
      }
    }
  }
  const double beta_c1 = std::sqrt(M_PI) * std::tgamma(1.25) / std::tgamma(0.75);
  const double c1 = constants_c(ModelParams(1, 1.0)).c1;
  const bool c1_ok = std::abs(c1 - 1.311029) <= 1e-6 && rel(c1, beta_c1) <= 1e-12;
  return result(c, t.failures == 0 && c1_ok,
                std::to_string(t.samples) + " points, worst relative error " + fmt(t.worst) + "; c1(sigma=1) = " +
                    fmt(c1) + " vs Beta identity " + fmt(rel(c1, beta_c1)));
}

CheckResult ray_variation_fd(const Check& c) {
  Tally t;
  int configs = 0;
  for (const auto& s : sample_stars(501, 4)) {
    ++configs;
    const auto& p = s.graph.params;
    for (const auto& b : branches(s.q, s.graph)) {
      const RayVariation rv = ray_variation(b, p);
      const double mu = b.point.mu, a = b.point.alpha;
      const double hm = 1e-6 * std::max(1.0, std::abs(mu)), ha = 1e-6 * std::max(1.0, a);
      const auto at = [&](double m, double al) {
        EdgeBranch e = b;
        e.point = make_point(m, al, p);
        return edge_trace(e, p);
      };
      const auto mp = at(mu + hm, a), mm = at(mu - hm, a), ap = at(mu, a + ha), am = at(mu, a - ha);
      for (double e : {rel((mp.phi0 - mm.phi0) / (2 * hm), rv.dphi_dmu), rel((mp.dphi0 - mm.dphi0) / (2 * hm), rv.dslope_dmu),
                       rel((ap.phi0 - am.phi0) / (2 * ha), rv.dphi_dalpha),
                       rel((ap.dphi0 - am.dphi0) / (2 * ha), rv.dslope_dalpha)})
        t.record(e <= 1e-5, e);
    }
  }
  return result(c, t.failures == 0 && configs >= 10,
                std::to_string(configs) + " central-zero configurations, " + std::to_string(t.samples) +
                    " derivatives, worst relative difference " + fmt(t.worst));
}

CheckResult star_counterexample(const Check& c) {
  const ViolationReport r3 = demonstrate_violation(pythagorean());
  const auto c5 = find_config(1, 5, 12);
  if (!c5) return result(c, false, "no d = 5 configuration found");
  const ViolationReport r5 = demonstrate_violation(*c5);
  const bool pass =
      r3.z_star == 1 && r3.measured_change == 1 && r3.sign_flip && r5.measured_change == 3 && r5.sign_flip;
  std::ostringstream os;
  os << "(3,4,5): Z* = " << r3.z_star << ", Z+ = " << r3.z_plus << ", Z- = " << r3.z_minus
     << ", flip = " << (r3.sign_flip ? "yes" : "no") << "; d = 5 rates (";
  for (std::size_t j = 0; j < c5->exact_rates->size(); ++j) os << (j ? "," : "") << (*c5->exact_rates)[j];
  os << "): |dZ| = " << r5.measured_change;
  return result(c, pass, os.str());
}

CheckResult nodal_change(const Check& c) {
  int checked = 0, mismatches = 0, incomplete = 0;
  for (const auto& s : sample_stars(701, 4)) {
    double scale = std::abs(s.q.mu);
    for (double a : s.q.alphas)
      scale = std::max(scale, std::abs(s.graph.params.nu) * std::pow(a, 2 * s.graph.params.sigma));
    const int z0 = count_star_nodes(s.q, s.graph);
    for (double sign : {1.0, -1.0}) {
      const auto res = continue_curve(s.q, s.graph, s.q.mu + sign * 1e-4 * scale, 2);
      if (!res.completed) {
        ++incomplete;
        continue;
      }
      const auto& last = res.points.back();
      ++checked;
      if (predict_nodal_change(last.q, s.q, s.graph) != last.nodal_count - z0) ++mismatches;
    }
  }
  return result(c, mismatches == 0 && incomplete == 0 && checked >= 10,
                std::to_string(checked) + " continuations, " + std::to_string(mismatches) + " mismatches, " +
                    std::to_string(incomplete) + " incomplete");
}

CheckResult jacobian_structure(const Check& c) {
  std::vector<CentralZeroStar> stars = sample_stars(801, 5);
  for (int d = 3; d <= 5; ++d) {
    const auto cfg = find_config(1, d, 12);
    stars.push_back({graph_of(*cfg), build_qstar(*cfg), cfg->zetas});
  }
  const auto c2 = find_config(2, 4, 12);
  stars.push_back({graph_of(*c2), build_qstar(*c2), c2->zetas});
  Tally schur, t_pos, t_two;
  int singular = 0, boundary_points = 0;
  double min_t_boundary = INFINITY;
  for (const auto& s : stars) {
    const SchurReport r = schur_report(s.q, s.graph);
    if (!(r.det_direct != 0.0) || jacobian(s.q, s.graph).ill_conditioned) ++singular;
    const double e = std::max(rel(r.det_schur, r.det_direct), rel(r.det_from_s, r.det_direct));
    schur.record(e <= 1e-8, e);
    for (std::size_t j = 0; j < r.t.size(); ++j) {
      t_pos.record(r.t[j] > 0.0);
      if (classify_region(s.q.mu, s.q.alphas[j], s.graph.params) != Region::PPlusMinus) continue;
      if (s.q.mu < 0.0) {
        t_two.record(r.t[j] > 2.0);
      } else {
        ++boundary_points;
        min_t_boundary = std::min(min_t_boundary, r.t[j]);
      }
    }
  }
  // Dense sweep of P+- with mu < 0.
  for (int sigma = 1; sigma <= 3; ++sigma) {
    const ModelParams p(sigma, 1.0);
    for (double mu : {-2.0, -1.0, -0.1, -1e-6})
      for (double f : {1.0001, 1.01, 1.5, 4.0, 100.0}) {
        const double tj = t_factor(mu, f * alpha_zero(mu, p), p);
        t_pos.record(tj > 0.0);
        t_two.record(tj > 2.0);
      }
  }
  const bool pass = singular == 0 && schur.failures == 0 && t_pos.failures == 0 && t_two.failures == 0;
  return result(c, pass,
                std::to_string(stars.size()) + " points, " + std::to_string(singular) +
                    " singular, worst Schur error " + fmt(schur.worst) + "; t > 0 at " +
                    std::to_string(t_pos.samples - t_pos.failures) + "/" + std::to_string(t_pos.samples) +
                    ", t > 2 at " + std::to_string(t_two.samples - t_two.failures) + "/" +
                    std::to_string(t_two.samples) + " P+- samples with mu < 0; min t at mu = 0 over " +
                    std::to_string(boundary_points) + " edges = " + fmt(min_t_boundary));
}

CheckResult curve_monotonicity(const Check& c) {
  const std::vector<double> grid = log_grid(1e-4, 10.0, 50);
  int samples = 0, violations = 0, unattainable = 0;
  for (double nu : {1.0, -1.0}) {
    const IntervalProblem prob(M_PI, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet, ModelParams(1, nu));
    for (int n = 1; n <= 5; ++n) {
      const CurveTrace tr = trace_curve(n, grid, prob);
      unattainable += static_cast<int>(tr.failures.size());
      samples += static_cast<int>(tr.samples.size());
      for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const double dmu = tr.samples[i].mu - tr.samples[i - 1].mu;
        if (!(nu > 0 ? dmu < 0.0 : dmu > 0.0)) ++violations;
      }
    }
  }
  return result(c, violations == 0 && samples > 0,
                std::to_string(samples) + " curve samples (DD, l = pi, n = 1..5, nu = +-1), " +
                    std::to_string(violations) + " monotonicity violations, " + std::to_string(unattainable) +
                    " unattainable samples reported");
}

// ---- invariants ----

CheckResult energy_invariant(const Check& c) {
  Tally t;
  for (const auto& s : region_samples()) {
    const LineSolution sol = make_line_solution(s.point, s.params, 1, 0.0);
    const double h = energy_of(s.point, s.params).h;
    for (int k = 0; k < 40; ++k) {
      const SolutionValue v = eval(sol, 0.037 * k * sol.lambda);
      const double p2 = v.phi * v.phi;
      const double hv = v.dphi * v.dphi + s.point.mu * p2 + s.params.nu * std::pow(p2, s.params.sigma + 1);
      const double e = std::abs(hv - h) / std::max(std::abs(h), s.point.alpha * s.point.alpha * 1e-3);
      t.record(e <= 1e-8, e);
    }
  }
  return result(c, t.failures == 0, std::to_string(t.samples) + " evaluations, worst relative drift " + fmt(t.worst));
}

CheckResult wavelength_monotonicity(const Check& c) {
  Tally t;
  for (const auto& s : region_samples()) {
    const WavelengthGradient g = wavelength_gradient(s.point, s.params);
    t.record(g.d_mu < 0.0 && (s.params.nu > 0 ? g.d_alpha < 0.0 : g.d_alpha > 0.0));
  }
  return result(c, t.failures == 0, std::to_string(t.samples) + " points, " + std::to_string(t.failures) + " sign errors");
}

CheckResult oracle_zero_count(const Check& c) {
  Tally drift;
  int windows = 0, mismatches = 0;
  for (const auto& s : region_samples()) {
    const double lambda = wavelength_value(s.point, s.params);
    const double end = 10.13 * lambda;
    const auto traj = oracle::integrate(oracle::zero_crossing_start(s.point, s.params), s.params, s.point.mu, end);
    drift.record(traj.max_energy_drift() <= 1e-8, traj.max_energy_drift());
    const LineSolution sol = make_line_solution(s.point, s.params, 1, 0.0);
    ++windows;
    if (static_cast<int>(traj.zeros().size()) != count_interior_zeros(sol, 0.0, end)) ++mismatches;
  }
  return result(c, drift.failures == 0 && mismatches == 0,
                std::to_string(windows) + " ten-period windows, worst energy drift " + fmt(drift.worst) + ", " +
                    std::to_string(mismatches) + " zero-count mismatches");
}

CheckResult turning_values(const Check& c) {
  Tally t;
  for (const auto& s : region_samples()) {
    if (s.params.sigma != 1) continue;
    const double h = energy_of(s.point, s.params).h;
    const double beta = oracle::first_turning_value(s.point, s.params);
    double best = INFINITY;
    for (int n : {1, 2})
      if (const auto b2 = turning_value_squared_sigma1(n, s.point.mu, h, s.params.nu); b2 && *b2 > 0.0)
        best = std::min(best, rel(beta, std::sqrt(*b2)));
    t.record(best <= 1e-8, best);
  }
  return result(c, t.failures == 0, std::to_string(t.samples) + " sigma = 1 points, worst relative error " + fmt(t.worst));
}

CheckResult level_set_accuracy(const Check& c) {
  Tally t;
  const std::vector<double> grid = log_grid(1e-3, 2.0, 12);
  for (double nu : {1.0, -1.0}) {
    const IntervalProblem prob(2.0, BoundaryCondition::Neumann, BoundaryCondition::Dirichlet, ModelParams(2, nu));
    for (int n = 1; n <= 4; ++n)
      for (const auto& s : trace_curve(n, grid, prob).samples) t.record(s.level_error <= 1e-10 && s.continuous, s.level_error);
  }
  return result(c, t.failures == 0 && t.samples > 0,
                std::to_string(t.samples) + " samples, worst level error " + fmt(t.worst));
}

CheckResult star_vertex_conditions(const Check& c) {
  Tally t;
  for (int d = 3; d <= 5; ++d) {
    const auto cfg = find_config(1, d, 12);
    const StarGraph g = graph_of(*cfg);
    const StarPoint q = build_qstar(*cfg);
    const auto res = continue_curve(q, g, 0.01, 2);
    for (const auto& pt : res.points) t.record(pt.residual_norm <= 1e-9, pt.residual_norm);
    t.record(res.completed);
  }
  return result(c, t.failures == 0, std::to_string(t.samples) + " curve points, worst residual " + fmt(t.worst));
}

CheckResult exact_conditions(const Check& c) {
  const auto a = config_from_rates(1, 1.0, {1, 1, -1}, {3, 4, 5});
  const auto b = config_from_rates(1, 1.0, {1, 1, 1}, {3, 4, 5});
  const auto s2 = config_from_rates(2, 1.0, {1, 1, 1, -1}, {9, 16, 25, 36});
  const bool pass = vanishing_condition(a).exact && vanishing_condition(a).holds && !vanishing_condition(b).holds &&
                    vanishing_condition(s2).exact && vanishing_condition(s2).holds &&
                    !find_config(1, 3, 12, std::vector<int>{1, 1, 1});
  return result(c, pass, "rational checks of the vanishing condition for sigma = 1, 2");
}

Check make(std::string id, std::string title, CheckResult (*fn)(const Check&)) {
  Check c{std::move(id), std::move(title), {}};
  c.run = [c, fn] { return fn(c); };
  return c;
}

}  // namespace

std::vector<Check> acceptance_checks() {
  return {
      make("1", "linear limit of the interval curves", linear_limit),
      make("2", "Sturm oscillation on the interval", sturm_oscillation),
      make("3", "wavelength quadrature vs ODE period", oracle_equivalence),
      make("4", "mu = 0 closed forms", mu_zero_forms),
      make("5", "ray-variation formulas vs finite differences", ray_variation_fd),
      make("6", "star counterexample", star_counterexample),
      make("7", "nodal-change formula", nodal_change),
      make("8", "Jacobian structure", jacobian_structure),
      make("9", "curve data monotonicity", curve_monotonicity),
  };
}

std::vector<Check> invariant_checks() {
  return {
      make("energy", "energy conserved along eval", energy_invariant),
      make("wavelength-signs", "signs of the wavelength derivatives", wavelength_monotonicity),
      make("oracle-windows", "oracle energy drift and zero counts", oracle_zero_count),
      make("turning-values", "oracle turning values vs closed form", turning_values),
      make("level-sets", "interval level-set accuracy", level_set_accuracy),
      make("star-residuals", "star curve residuals", star_vertex_conditions),
      make("exact-conditions", "rational vanishing conditions", exact_conditions),
  };
}

std::vector<Check> suite(const std::string& name) {
  if (name == "acceptance") return acceptance_checks();
  if (name == "invariants") return invariant_checks();
  if (name == "all") {
    auto out = acceptance_checks();
    for (auto& c : invariant_checks()) out.push_back(std::move(c));
    return out;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + name + "' (acceptance, invariants, all)");
}

CheckResult run_check(const Check& check) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = check.run();
  } catch (const std::exception& e) {
    r = {check.id, check.title, false, std::string("exception: ") + e.what(), 0.0};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string format_line(const CheckResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " " + r.id + " " + r.title + ": " + r.detail;
}

CentralZeroStar random_central_zero_star(std::mt19937& rng, int region) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const int sigma = 1 + static_cast<int>(rng() % 2);
    const int d = 3 + static_cast<int>(rng() % 3);
    const ModelParams params(sigma, region == 2 ? -1.0 : 1.0);
    double mu = 0.0, a_lo = 0.0, a_hi = 0.0;
    if (region == 0) {
      mu = 0.1 + 1.9 * u(rng);
      a_lo = 0.5, a_hi = 1.5;
    } else if (region == 1) {
      mu = -(0.1 + 0.9 * u(rng));
      a_lo = 1.3 * alpha_zero(mu, params), a_hi = 2.0 * alpha_zero(mu, params);
    } else {
      mu = 0.5 + 1.5 * u(rng);
      a_lo = 0.2 * alpha_critical(mu, params), a_hi = 0.7 * alpha_critical(mu, params);
    }
    std::vector<double> alphas;
    std::vector<int> zetas, ns;
    std::vector<BoundaryCondition> bcs;
    for (int j = 0; j < d; ++j) {
      if (j + 1 < d) {
        alphas.push_back(a_lo + (a_hi - a_lo) * u(rng));
        zetas.push_back(rng() % 2 ? 1 : -1);
      }
      ns.push_back(1 + static_cast<int>(rng() % 3));
      bcs.push_back(rng() % 2 ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann);
    }
    try {
      auto star = central_zero_star(mu, alphas, zetas, ns, bcs, params);
      const double last = star.q.alphas.back();
      const double lo = region == 1 ? 1.1 * alpha_zero(mu, params) : 0.05;
      const double hi = region == 2 ? 0.9 * alpha_critical(mu, params) : 50.0;
      if (last > lo && last < hi) return star;
    } catch (const Error&) {
    }
  }
}

}  // namespace nls::verify
