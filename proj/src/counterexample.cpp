#include "nls/counterexample.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <json.hpp>

#include "nls/error.hpp"
#include "nls/quadrature.hpp"

namespace nls {

namespace {

using boost::multiprecision::cpp_int;

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Boundary-vertex sign of edge j given the slope sign at the center.
int boundary_sign(int center_zeta, int n, BoundaryCondition bc) {
  const int parity = bc == BoundaryCondition::Dirichlet ? n : n - 1;
  return parity % 2 == 0 ? center_zeta : -center_zeta;
}

double m_of(int n, BoundaryCondition bc) { return bc == BoundaryCondition::Dirichlet ? n : n - 0.5; }

std::optional<cpp_int> integer_root(const cpp_int& v, int k) {
  if (v < 0) return std::nullopt;
  const double guess = std::round(std::pow(v.convert_to<double>(), 1.0 / k));
  for (double g = std::max(0.0, guess - 2.0); g <= guess + 2.0; g += 1.0) {
    const cpp_int c(static_cast<long long>(g));
    if (boost::multiprecision::pow(c, k) == v) return c;
  }
  return std::nullopt;
}

std::optional<Rational> rational_root(const Rational& r, int k) {
  const auto num = integer_root(boost::multiprecision::numerator(r), k);
  const auto den = integer_root(boost::multiprecision::denominator(r), k);
  if (!num || !den) return std::nullopt;
  return Rational(*num, *den);
}

Rational rational_pow(const Rational& r, int e) {
  Rational out = 1;
  const Rational base = e >= 0 ? r : Rational(1) / r;
  for (int i = 0; i < std::abs(e); ++i) out *= base;
  return out;
}

double rate(const StarConfig& c, std::size_t j) { return half_wave_count(c, j) / c.lengths[j]; }

void validate(const StarConfig& c) {
  const std::size_t d = static_cast<std::size_t>(c.d);
  if (c.d < 3) throw Error(ErrorKind::InvalidArgument, "star needs d >= 3");
  if (c.zetas.size() != d || c.ns.size() != d || c.lengths.size() != d || c.bcs.size() != d)
    throw Error(ErrorKind::InvalidArgument, "config vectors must all have d entries");
  for (std::size_t j = 0; j < d; ++j) {
    if (c.zetas[j] != 1 && c.zetas[j] != -1) throw Error(ErrorKind::InvalidArgument, "zeta must be +1 or -1");
    if (c.ns[j] < 1) throw Error(ErrorKind::InvalidArgument, "n_j must be positive");
    if (!(c.lengths[j] > 0.0)) throw Error(ErrorKind::InvalidArgument, "lengths must be positive");
  }
}

ConditionCheck power_sum_check(const StarConfig& c, double exponent, bool want_zero) {
  validate(c);
  ConditionCheck out;
  for (std::size_t j = 0; j < c.zetas.size(); ++j) {
    const double term = c.zetas[j] * std::pow(rate(c, j), exponent);
    out.value += term;
    out.scale = std::max(out.scale, std::abs(term));
  }
  const double tol = want_zero ? 1e-12 : 1e-9;
  const bool near_zero = std::abs(out.value) <= tol * out.scale;
  out.holds = want_zero ? near_zero : !near_zero;
  if (c.exact_rates) {
    // exponent = (sigma +- 1) / sigma: exact when every rate is a sigma-th power.
    std::vector<Rational> roots;
    for (const auto& r : *c.exact_rates) {
      const auto k = rational_root(r, c.sigma);
      if (!k) return out;
      roots.push_back(*k);
    }
    const int e = static_cast<int>(std::lround(exponent * c.sigma));
    Rational sum = 0;
    for (std::size_t j = 0; j < roots.size(); ++j) sum += c.zetas[j] * rational_pow(roots[j], e);
    out.exact = true;
    out.holds = want_zero ? sum == 0 : sum != 0;
  }
  return out;
}

}  // namespace

double half_wave_count(const StarConfig& config, std::size_t j) { return m_of(config.ns[j], config.bcs[j]); }

StarConfig config_from_rates(int sigma, double nu, const std::vector<int>& zetas, const std::vector<Rational>& rates,
                             std::vector<int> ns, std::vector<BoundaryCondition> bcs) {
  const std::size_t d = zetas.size();
  if (rates.size() != d) throw Error(ErrorKind::InvalidArgument, "one rate per edge required");
  if (ns.empty()) ns.assign(d, 1);
  if (bcs.empty()) bcs.assign(d, BoundaryCondition::Dirichlet);
  StarConfig c;
  c.d = static_cast<int>(d);
  c.sigma = sigma;
  c.nu = nu;
  c.zetas = zetas;
  c.ns = ns;
  c.bcs = bcs;
  std::vector<Rational> exact;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(rates[j] > 0)) throw Error(ErrorKind::InvalidArgument, "rates must be positive");
    const Rational m = bcs[j] == BoundaryCondition::Dirichlet ? Rational(ns[j]) : Rational(2 * ns[j] - 1, 2);
    c.lengths.push_back(static_cast<double>(m / rates[j]));
    exact.push_back(rates[j]);
  }
  c.exact_rates = exact;
  validate(c);
  return c;
}

ConditionCheck vanishing_condition(const StarConfig& config) {
  return power_sum_check(config, 1.0 + 1.0 / config.sigma, true);
}

ConditionCheck sign_change_condition(const StarConfig& config) {
  return power_sum_check(config, -1.0 + 1.0 / config.sigma, false);
}

StarGraph graph_of(const StarConfig& config) {
  validate(config);
  return StarGraph(config.lengths, config.bcs, ModelParams(config.sigma, config.nu));
}

StarPoint build_qstar(const StarConfig& config) {
  validate(config);
  if (!(config.nu > 0.0)) throw Error(ErrorKind::ConditionViolated, "the construction at mu = 0 needs nu > 0");
  if (!vanishing_condition(config).holds)
    throw Error(ErrorKind::ConditionViolated, "sum zeta_j (m_j/l_j)^(1+1/sigma) does not vanish");
  const ModelParams params(config.sigma, config.nu);
  const double c1 = constants_c(params).c1;
  StarPoint q;
  q.mu = 0.0;
  for (std::size_t j = 0; j < config.zetas.size(); ++j) {
    q.alphas.push_back(std::pow(2.0 * c1 / std::sqrt(config.nu) * rate(config, j), 1.0 / config.sigma));
    q.zetas.push_back(boundary_sign(config.zetas[j], config.ns[j], config.bcs[j]));
  }
  return q;
}

std::optional<StarConfig> find_config(int sigma, int d, int search_bound,
                                      const std::optional<std::vector<int>>& fixed_zetas) {
  if (d < 3 || sigma < 1 || search_bound < 1) throw Error(ErrorKind::InvalidArgument, "invalid search parameters");
  const double p = 1.0 + 1.0 / sigma;
  std::vector<int> zetas(d, 1);
  const std::size_t sign_count = std::size_t{1} << d;
  for (std::size_t mask = 0; mask < sign_count; ++mask) {
    // Bit d-1-j of mask set means zeta_j = -1, so the last entry varies fastest.
    for (int j = 0; j < d; ++j) zetas[j] = (mask >> (d - 1 - j)) & 1 ? -1 : 1;
    if (fixed_zetas && *fixed_zetas != zetas) continue;
    std::vector<int> head(d - 1, 1);
    for (;;) {
      double rest = 0.0;
      cpp_int rest_exact = 0;
      for (int j = 0; j < d - 1; ++j) {
        rest += zetas[j] * std::pow(head[j], p);
        rest_exact += zetas[j] * boost::multiprecision::pow(cpp_int(head[j]), 2);
      }
      // zeta_d r_d^p = -rest
      const double needed = -zetas[d - 1] * rest;
      std::optional<StarConfig> hit;
      if (sigma == 1) {
        const cpp_int sq = -zetas[d - 1] * rest_exact;
        if (const auto r = integer_root(sq, 2); r && *r >= 1 && *r <= search_bound) {
          std::vector<Rational> rates;
          for (int v : head) rates.emplace_back(v);
          rates.emplace_back(*r);
          hit = config_from_rates(sigma, 1.0, zetas, rates);
        }
      } else if (needed > 0.0) {
        const double rd = std::pow(needed, 1.0 / p);
        if (rd <= search_bound) {
          StarConfig c;
          c.d = d;
          c.sigma = sigma;
          c.nu = 1.0;
          c.zetas = zetas;
          c.ns.assign(d, 1);
          c.bcs.assign(d, BoundaryCondition::Dirichlet);
          for (int v : head) c.lengths.push_back(1.0 / v);
          c.lengths.push_back(1.0 / rd);
          hit = c;
        }
      }
      if (hit && vanishing_condition(*hit).holds && sign_change_condition(*hit).holds) return hit;
      int k = d - 2;
      while (k >= 0 && head[k] == search_bound) head[k--] = 1;
      if (k < 0) break;
      ++head[k];
    }
  }
  return std::nullopt;
}

std::optional<StarConfig> find_config(int sigma, int d, int search_bound) {
  return find_config(sigma, d, search_bound, std::nullopt);
}

double flux_prefactor(const ModelParams& params) {
  return 1.0 - (1.0 + 1.0 / params.sigma) * constants_c(params).c3;
}

ViolationReport demonstrate_violation(const StarConfig& config, double delta_mu) {
  ViolationReport r;
  r.config = config;
  if (!sign_change_condition(config).holds)
    throw Error(ErrorKind::ConditionViolated, "sum zeta_j (m_j/l_j)^(-1+1/sigma) vanishes");
  const StarGraph graph = graph_of(config);
  r.q_star = build_qstar(config);
  r.z_star = count_star_nodes(r.q_star, graph);
  r.residual_star = residual_norm(r.q_star, graph);
  r.flux_prefactor = flux_prefactor(graph.params);
  double delta = delta_mu;
  if (!(delta > 0.0)) {
    delta = INFINITY;
    for (double a : r.q_star.alphas) delta = std::min(delta, 1e-3 * config.nu * std::pow(a, 2 * config.sigma));
  }
  std::string last_failure;
  for (int attempt = 0; attempt <= 10; ++attempt, delta *= 0.5) {
    const auto plus = continue_curve(r.q_star, graph, delta, 4);
    const auto minus = continue_curve(r.q_star, graph, -delta, 4);
    if (!plus.completed || !minus.completed) {
      last_failure = (plus.completed ? minus : plus).message;
      continue;
    }
    const auto& qp = plus.points.back();
    const auto& qm = minus.points.back();
    r.delta_mu = delta;
    r.z_plus = qp.nodal_count;
    r.z_minus = qm.nodal_count;
    r.central_plus = qp.central_value;
    r.central_minus = qm.central_value;
    r.residual_plus = qp.residual_norm;
    r.residual_minus = qm.residual_norm;
    r.predicted_plus = predict_nodal_change(qp.q, r.q_star, graph);
    r.predicted_minus = predict_nodal_change(qm.q, r.q_star, graph);
    r.measured_change = std::abs(r.z_plus - r.z_minus);
    int sum = 0;
    for (int z : config.zetas) sum += z;
    r.zeta_sum = std::abs(sum);
    r.sign_flip = sgn(r.central_plus) != 0 && sgn(r.central_plus) == -sgn(r.central_minus);
    r.change_matches = r.measured_change == r.zeta_sum;
    r.prediction_matches =
        r.predicted_plus == r.z_plus - r.z_star && r.predicted_minus == r.z_minus - r.z_star;
    return r;
  }
  throw Error(ErrorKind::NonConvergence, "continuation away from q* failed: " + last_failure);
}

std::string to_json(const ViolationReport& r) {
  using nlohmann::ordered_json;
  ordered_json cfg;
  cfg["d"] = r.config.d;
  cfg["sigma"] = r.config.sigma;
  cfg["nu"] = r.config.nu;
  cfg["zetas"] = r.config.zetas;
  cfg["ns"] = r.config.ns;
  cfg["lengths"] = r.config.lengths;
  std::vector<std::string> bcs;
  for (auto bc : r.config.bcs) bcs.emplace_back(to_string(bc));
  cfg["bcs"] = bcs;
  if (r.config.exact_rates) {
    std::vector<std::string> rates;
    for (const auto& v : *r.config.exact_rates) rates.push_back(v.str());
    cfg["rates"] = rates;
  }
  ordered_json j;
  j["config"] = cfg;
  j["q_star"] = {{"mu", r.q_star.mu}, {"alphas", r.q_star.alphas}, {"boundary_signs", r.q_star.zetas}};
  j["delta_mu"] = r.delta_mu;
  j["z_star"] = r.z_star;
  j["z_plus"] = r.z_plus;
  j["z_minus"] = r.z_minus;
  j["measured_change"] = r.measured_change;
  j["zeta_sum"] = r.zeta_sum;
  j["central_plus"] = r.central_plus;
  j["central_minus"] = r.central_minus;
  j["predicted_plus"] = r.predicted_plus;
  j["predicted_minus"] = r.predicted_minus;
  j["residual_star"] = r.residual_star;
  j["residual_plus"] = r.residual_plus;
  j["residual_minus"] = r.residual_minus;
  j["flux_prefactor"] = r.flux_prefactor;
  j["sign_flip"] = r.sign_flip;
  j["change_matches"] = r.change_matches;
  j["prediction_matches"] = r.prediction_matches;
  return j.dump();
}

CentralZeroStar central_zero_star(double mu, const std::vector<double>& head_alphas,
                                  const std::vector<int>& center_zetas, const std::vector<int>& ns,
                                  const std::vector<BoundaryCondition>& bcs, const ModelParams& params) {
  const std::size_t d = ns.size();
  if (d < 3 || head_alphas.size() != d - 1 || center_zetas.size() != d - 1 || bcs.size() != d)
    throw Error(ErrorKind::InvalidArgument, "central_zero_star: inconsistent sizes");
  const auto energy = [&](double a) { return mu * a * a + params.nu * std::pow(a, 2 * (params.sigma + 1)); };
  double flux = 0.0;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    if (classify_region(mu, head_alphas[j], params) == Region::Outside)
      throw Error(ErrorKind::OutsideRegion, "edge amplitude outside P");
    flux += center_zetas[j] * std::sqrt(energy(head_alphas[j]));
  }
  if (flux == 0.0) throw Error(ErrorKind::ConditionViolated, "flux of the given edges already cancels");
  const double target = flux * flux;
  double lo = params.nu > 0.0 ? (mu > 0.0 ? 0.0 : alpha_zero(mu, params)) : 0.0;
  double hi;
  if (params.nu > 0.0) {
    hi = std::max(1.0, 2.0 * lo);
    while (energy(hi) <= target) hi *= 2.0;
  } else {
    hi = alpha_critical(mu, params);
    if (!(energy(hi) > target)) throw Error(ErrorKind::Unattainable, "flux exceeds the P- energy bound");
  }
  std::uintmax_t max_iter = 200;
  const auto root = boost::math::tools::toms748_solve(
      [&](double a) { return energy(a) - target; }, lo, hi,
      [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); }, max_iter);
  const double alpha_d = 0.5 * (root.first + root.second);

  CentralZeroStar out;
  out.center_zetas = center_zetas;
  out.center_zetas.push_back(flux > 0.0 ? -1 : 1);
  out.q.mu = mu;
  out.q.alphas = head_alphas;
  out.q.alphas.push_back(alpha_d);
  std::vector<double> lengths;
  for (std::size_t j = 0; j < d; ++j) {
    const ParamPoint pt = make_point(mu, out.q.alphas[j], params);
    lengths.push_back(0.5 * m_of(ns[j], bcs[j]) * wavelength_value(pt, params));
    out.q.zetas.push_back(boundary_sign(out.center_zetas[j], ns[j], bcs[j]));
  }
  out.graph = StarGraph(lengths, bcs, params);
  return out;
}

}  // namespace nls
