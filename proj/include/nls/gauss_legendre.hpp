#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace nls::quad {

/// Nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of the given order; power-of-two orders 8..512 are cached.
const GaussLegendreRule& gauss_legendre(int order);

GaussLegendreRule compute_gauss_legendre(int order);

template <std::size_t N>
struct QuadResult {
  std::array<double, N> value{};
  std::array<double, N> est_error{};
  bool converged = true;
};

struct Tolerance {
  double abs = 1e-14;
  double rel = 1e-12;
  int max_depth = 48;
};

namespace detail {

template <std::size_t N, class F>
std::array<double, N> apply_rule(const F& f, double a, double b, const GaussLegendreRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  std::array<double, N> sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const std::array<double, N> v = f(mid + half * rule.nodes[i]);
    for (std::size_t k = 0; k < N; ++k) sum[k] += rule.weights[i] * v[k];
  }
  for (auto& s : sum) s *= half;
  return sum;
}

template <std::size_t N>
bool within(const std::array<double, N>& cur, const std::array<double, N>& prev, const Tolerance& tol,
            std::array<double, N>& err) {
  bool ok = true;
  for (std::size_t k = 0; k < N; ++k) {
    err[k] = std::abs(cur[k] - prev[k]);
    if (!(err[k] <= std::max(tol.abs, tol.rel * std::abs(cur[k])))) ok = false;
  }
  return ok;
}

template <std::size_t N, class F>
QuadResult<N> adaptive(const F& f, double a, double b, Tolerance tol, int depth) {
  constexpr int kOrders[] = {16, 32, 64, 128};
  std::array<double, N> prev = apply_rule<N>(f, a, b, gauss_legendre(kOrders[0]));
  QuadResult<N> out;
  for (std::size_t i = 1; i < std::size(kOrders); ++i) {
    out.value = apply_rule<N>(f, a, b, gauss_legendre(kOrders[i]));
    if (within(out.value, prev, tol, out.est_error)) return out;
    prev = out.value;
  }
  if (depth >= tol.max_depth) {
    out.converged = false;
    return out;
  }
  // Peaked integrand: bisect and refine each half.
  const double mid = 0.5 * (a + b);
  Tolerance half_tol = tol;
  half_tol.abs *= 0.5;
  QuadResult<N> left = adaptive<N>(f, a, mid, half_tol, depth + 1);
  QuadResult<N> right = adaptive<N>(f, mid, b, half_tol, depth + 1);
  for (std::size_t k = 0; k < N; ++k) {
    out.value[k] = left.value[k] + right.value[k];
    out.est_error[k] = left.est_error[k] + right.est_error[k];
  }
  out.converged = left.converged && right.converged;
  return out;
}

}  // namespace detail

/// Integrates a smooth vector-valued f over [a, b]. Gauss-Legendre order is
/// doubled until successive estimates agree; intervals that still disagree at
/// the highest order are bisected.
template <std::size_t N, class F>
QuadResult<N> integrate(const F& f, double a, double b, Tolerance tol = {}) {
  if (a == b) return {};
  return detail::adaptive<N>(f, a, b, tol, 0);
}

}  // namespace nls::quad
