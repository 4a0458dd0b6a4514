#include "nls/star_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nls/error.hpp"
#include "nls/quadrature.hpp"

namespace nls {

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

std::string describe(const StarPoint& q) {
  std::ostringstream os;
  os.precision(17);
  os << "mu=" << q.mu << " alphas=(";
  for (std::size_t j = 0; j < q.alphas.size(); ++j) os << (j ? "," : "") << q.alphas[j];
  os << ") zetas=(";
  for (std::size_t j = 0; j < q.zetas.size(); ++j) os << (j ? "," : "") << (q.zetas[j] > 0 ? '+' : '-');
  os << ")";
  return os.str();
}

std::vector<EdgeTrace> traces(const StarPoint& q, const StarGraph& graph) {
  std::vector<EdgeTrace> out;
  for (const auto& b : branches(q, graph)) out.push_back(edge_trace(b, graph.params));
  return out;
}

bool all_central_zero(const std::vector<EdgeTrace>& ts) {
  return std::all_of(ts.begin(), ts.end(), [](const EdgeTrace& t) { return t.central_zero; });
}

Eigen::VectorXd residual_vec(const StarPoint& q, const StarGraph& graph) {
  const ResidualVector r = residual(q, graph);
  Eigen::VectorXd v(graph.degree());
  v(0) = r.n1;
  for (std::size_t j = 0; j < r.nj.size(); ++j) v(j + 1) = r.nj[j];
  return v;
}

bool inside(const StarPoint& q, const ModelParams& params) {
  for (double a : q.alphas)
    if (!(a > 0.0) || classify_region(q.mu, a, params) == Region::Outside) return false;
  return true;
}

double condition_number(const Eigen::MatrixXd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : INFINITY;
}

}  // namespace

std::vector<EdgeBranch> branches(const StarPoint& q, const StarGraph& graph) {
  const std::size_t d = graph.degree();
  if (q.alphas.size() != d || q.zetas.size() != d)
    throw Error(ErrorKind::InvalidArgument, "star point does not match the graph degree");
  std::vector<EdgeBranch> out;
  out.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (q.zetas[j] != 1 && q.zetas[j] != -1) throw Error(ErrorKind::InvalidArgument, "branch sign must be +1 or -1");
    out.push_back({make_point(q.mu, q.alphas[j], graph.params), graph.boundary_bcs[j], q.zetas[j],
                   graph.edge_lengths[j]});
  }
  return out;
}

ResidualVector residual(const StarPoint& q, const StarGraph& graph) {
  const auto ts = traces(q, graph);
  ResidualVector r;
  for (const auto& t : ts) r.n1 += t.dphi0;
  for (std::size_t j = 1; j < ts.size(); ++j) r.nj.push_back(ts[j].phi0 - ts[0].phi0);
  return r;
}

double residual_norm(const StarPoint& q, const StarGraph& graph) {
  const ResidualVector r = residual(q, graph);
  const ModelParams& p = graph.params;
  double slope_scale = 0.0, amp_scale = 0.0;
  for (double a : q.alphas) {
    const double h = q.mu * a * a + p.nu * std::pow(a, 2 * (p.sigma + 1));
    slope_scale = std::max(slope_scale, std::sqrt(std::abs(h)));
    amp_scale = std::max(amp_scale, a);
  }
  double gap = 0.0;
  for (double v : r.nj) gap = std::max(gap, std::abs(v));
  return std::max(std::abs(r.n1) / slope_scale, gap / amp_scale);
}

double t_factor(double mu, double alpha, const ModelParams& params) {
  const double c = params.nu * std::pow(alpha, 2 * params.sigma);
  return (mu + (params.sigma + 1) * c) / (mu + c);
}

RayVariation ray_variation(const EdgeBranch& branch, const ModelParams& params) {
  const EdgeTrace t = edge_trace(branch, params);
  if (!t.central_zero) throw Error(ErrorKind::ConditionViolated, "ray variation formulas need a central zero");
  const double mu = branch.point.mu;
  const double alpha = branch.point.alpha;
  const double c = params.nu * std::pow(alpha, 2 * params.sigma);
  const double root = std::sqrt(mu + c);
  const int zeta = sgn(t.dphi0);
  const auto w = wavelength(branch.point, params);
  RayVariation v;
  v.dphi_dmu = zeta * t.xi * alpha * root * w.d_mu;
  v.dslope_dmu = 0.5 * zeta * alpha / root;
  v.dphi_dalpha = zeta * t.xi * alpha * root * w.d_alpha;
  v.dslope_dalpha = zeta * (mu + (params.sigma + 1) * c) / root;
  return v;
}

Eigen::MatrixXd jacobian_fd(const StarPoint& q, const StarGraph& graph) {
  const std::size_t d = graph.degree();
  Eigen::MatrixXd m(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const double h = 1e-6 * std::max(1.0, q.alphas[k]);
    StarPoint plus = q, minus = q;
    plus.alphas[k] += h;
    minus.alphas[k] -= h;
    if (inside(minus, graph.params)) {
      m.col(k) = (residual_vec(plus, graph) - residual_vec(minus, graph)) / (2.0 * h);
    } else {
      StarPoint plus2 = q;
      plus2.alphas[k] += 2.0 * h;
      m.col(k) = (-3.0 * residual_vec(q, graph) + 4.0 * residual_vec(plus, graph) - residual_vec(plus2, graph)) /
                 (2.0 * h);
    }
  }
  return m;
}

JacobianResult jacobian(const StarPoint& q, const StarGraph& graph) {
  const auto bs = branches(q, graph);
  const std::size_t d = bs.size();
  JacobianResult out;
  std::vector<EdgeTrace> ts;
  for (const auto& b : bs) ts.push_back(edge_trace(b, graph.params));
  out.analytic = all_central_zero(ts);
  if (out.analytic) {
    out.matrix = Eigen::MatrixXd::Zero(d, d);
    std::vector<RayVariation> rv;
    for (const auto& b : bs) rv.push_back(ray_variation(b, graph.params));
    for (std::size_t k = 0; k < d; ++k) out.matrix(0, k) = rv[k].dslope_dalpha;
    for (std::size_t j = 1; j < d; ++j) {
      out.matrix(j, 0) = -rv[0].dphi_dalpha;
      out.matrix(j, j) = rv[j].dphi_dalpha;
    }
  } else {
    out.matrix = jacobian_fd(q, graph);
  }
  out.condition = condition_number(out.matrix);
  out.ill_conditioned = !(out.condition <= kConditionLimit);
  return out;
}

Eigen::VectorXd mu_derivative(const StarPoint& q, const StarGraph& graph) {
  const auto bs = branches(q, graph);
  std::vector<EdgeTrace> ts;
  for (const auto& b : bs) ts.push_back(edge_trace(b, graph.params));
  const std::size_t d = bs.size();
  Eigen::VectorXd v(d);
  if (all_central_zero(ts)) {
    std::vector<RayVariation> rv;
    for (const auto& b : bs) rv.push_back(ray_variation(b, graph.params));
    v(0) = 0.0;
    for (const auto& r : rv) v(0) += r.dslope_dmu;
    for (std::size_t j = 1; j < d; ++j) v(j) = rv[j].dphi_dmu - rv[0].dphi_dmu;
    return v;
  }
  const double h = 1e-6 * std::max(1.0, std::abs(q.mu));
  StarPoint plus = q, minus = q;
  plus.mu += h;
  minus.mu -= h;
  return (residual_vec(plus, graph) - residual_vec(minus, graph)) / (2.0 * h);
}

SchurReport schur_report(const StarPoint& q, const StarGraph& graph) {
  const JacobianResult jr = jacobian(q, graph);
  if (!jr.analytic) throw Error(ErrorKind::ConditionViolated, "block structure needs a central zero");
  const auto bs = branches(q, graph);
  const Eigen::MatrixXd& m = jr.matrix;
  const std::size_t d = bs.size();
  SchurReport r;
  r.a = m(0, 0);
  double prod_d = 1.0, correction = 0.0;
  for (std::size_t j = 1; j < d; ++j) {
    r.b.push_back(m(0, j));
    r.c.push_back(m(j, 0));
    r.d.push_back(m(j, j));
    prod_d *= m(j, j);
    correction += m(0, j) * m(j, 0) / m(j, j);
  }
  r.det_direct = m.determinant();
  r.det_schur = prod_d * (r.a - correction);
  double prod_all = 1.0;
  for (const auto& b : bs) {
    const RayVariation rv = ray_variation(b, graph.params);
    const EdgeTrace t = edge_trace(b, graph.params);
    const double tj = t_factor(q.mu, b.point.alpha, graph.params);
    r.t.push_back(tj);
    r.s_sum += tj / (t.xi * b.point.alpha * wavelength(b.point, graph.params).d_alpha);
    r.s_direct += rv.dslope_dalpha / rv.dphi_dalpha;
    prod_all *= rv.dphi_dalpha;
  }
  r.det_from_s = prod_all * r.s_direct;
  return r;
}

StarPoint newton_solve(const StarPoint& q0, const StarGraph& graph, double fixed_mu, NewtonOptions options) {
  StarPoint q = q0;
  q.mu = fixed_mu;
  if (!inside(q, graph.params)) throw Error(ErrorKind::RegionExit, "initial guess outside P: " + describe(q));
  double norm = residual_norm(q, graph);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (norm <= options.tolerance) return q;
    const JacobianResult jr = jacobian(q, graph);
    if (jr.ill_conditioned) throw Error(ErrorKind::SingularJacobian, "Jacobian is singular at " + describe(q));
    const Eigen::VectorXd step = jr.matrix.partialPivLu().solve(-residual_vec(q, graph));
    bool accepted = false, region_blocked = false;
    double scale = 1.0;
    for (int k = 0; k <= options.max_halvings && !accepted; ++k, scale *= 0.5) {
      StarPoint trial = q;
      for (std::size_t j = 0; j < trial.alphas.size(); ++j) trial.alphas[j] += scale * step(j);
      if (!inside(trial, graph.params)) {
        region_blocked = true;
        continue;
      }
      double trial_norm = 0.0;
      try {
        trial_norm = residual_norm(trial, graph);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DivergingIntegral) throw;
        region_blocked = true;
        continue;
      }
      if (trial_norm < norm) {
        q = trial;
        norm = trial_norm;
        accepted = true;
      }
    }
    if (!accepted) {
      if (norm <= 10.0 * options.tolerance) return q;
      throw Error(region_blocked ? ErrorKind::RegionExit : ErrorKind::NonConvergence,
                  "line search failed at " + describe(q));
    }
  }
  if (norm <= options.tolerance) return q;
  throw Error(ErrorKind::NonConvergence, "Newton iteration limit reached at " + describe(q));
}

double central_value(const StarPoint& q, const StarGraph& graph) {
  return edge_trace(branches(q, graph).front(), graph.params).phi0;
}

int count_star_nodes(const StarPoint& q, const StarGraph& graph) {
  int count = 0;
  bool center = true;
  for (const auto& b : branches(q, graph)) {
    const LineSolution sol = edge_solution(b, graph.params);
    count += count_interior_zeros(sol, 0.0, b.edge_length);
    center = center && zero_at(sol, 0.0);
  }
  return count + (center ? 1 : 0);
}

LocalCurvePoint make_curve_point(const StarPoint& q, const StarGraph& graph) {
  return {q, central_value(q, graph), count_star_nodes(q, graph), residual_norm(q, graph)};
}

ContinuationResult continue_curve(const StarPoint& q_start, const StarGraph& graph, double mu_end, int steps,
                                  NewtonOptions options) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "continuation needs at least one step");
  ContinuationResult out;
  out.points.push_back(make_curve_point(q_start, graph));
  const double full = (mu_end - q_start.mu) / steps;
  const double min_step = std::abs(full) / 1024.0;
  double step = full;
  StarPoint current = q_start;
  while (current.mu != mu_end) {
    const double remaining = mu_end - current.mu;
    const double next_mu = std::abs(step) >= std::abs(remaining) * (1.0 - 1e-12) ? mu_end : current.mu + step;
    const double dmu = next_mu - current.mu;
    StarPoint guess = current;
    try {
      const JacobianResult jr = jacobian(current, graph);
      if (!jr.ill_conditioned) {
        const Eigen::VectorXd tangent = jr.matrix.partialPivLu().solve(-mu_derivative(current, graph));
        for (std::size_t j = 0; j < guess.alphas.size(); ++j) guess.alphas[j] += tangent(j) * dmu;
        guess.mu = next_mu;
        if (!inside(guess, graph.params)) guess.alphas = current.alphas;
      }
    } catch (const Error&) {
      guess.alphas = current.alphas;
    }
    try {
      current = newton_solve(guess, graph, next_mu, options);
      out.points.push_back(make_curve_point(current, graph));
      if (std::abs(step) < std::abs(full)) step = std::min(std::abs(full), 2.0 * std::abs(step)) * (full < 0 ? -1 : 1);
    } catch (const Error& e) {
      step *= 0.5;
      if (std::abs(step) < min_step) {
        out.message = e.what();
        break;
      }
    }
  }
  out.completed = current.mu == mu_end;
  out.reached_mu = current.mu;
  return out;
}

int predict_nodal_change(int central_sign, const std::vector<int>& slope_signs) {
  if (central_sign == 0) return 0;
  int sum = 0;
  for (int s : slope_signs) sum += s;
  const int d = static_cast<int>(slope_signs.size());
  return (-2 + d - central_sign * sum) / 2;
}

int predict_nodal_change(const StarPoint& q, const StarPoint& q_star, const StarGraph& graph) {
  const auto ts = traces(q_star, graph);
  if (!all_central_zero(ts)) throw Error(ErrorKind::ConditionViolated, "reference point has no central zero");
  std::vector<int> slopes;
  for (const auto& t : ts) slopes.push_back(sgn(t.dphi0));
  double amp = 0.0;
  for (double a : q.alphas) amp = std::max(amp, a);
  const double phi0 = central_value(q, graph);
  const int s = std::abs(phi0) <= kCentralZeroTolerance * amp ? 0 : sgn(phi0);
  return predict_nodal_change(s, slopes);
}

}  // namespace nls
