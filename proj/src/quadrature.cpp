#include "nls/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nls/error.hpp"

namespace nls {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double power_sum_from(double s2, int sigma) {
  double sum = 1.0;
  double p = 1.0;
  for (int j = 1; j <= sigma; ++j) {
    p *= s2;
    sum += p;
  }
  return sum;
}

std::string describe(const ParamPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(mu=" << p.mu << ", alpha=" << p.alpha << ")";
  return os.str();
}

}  // namespace

KappaFactor::KappaFactor(const ParamPoint& point, const ModelParams& params)
    : point_(point), params_(params), coupling_(params.nu * std::pow(point.alpha, 2 * params.sigma)) {
  if (point.region == Region::Outside)
    throw Error(ErrorKind::OutsideRegion, "wavelength undefined outside P at " + describe(point));
  if (params.nu > 0.0) {
    minimum_ = point.boundary_gap ? *point.boundary_gap : point.mu + coupling_;
    if (point.region == Region::PPlusMinus && !(minimum_ / coupling_ >= kBoundaryGuard))
      throw Error(ErrorKind::DivergingIntegral, "mu within guard of mu_0 at " + describe(point));
  } else {
    const double mu_c = (params.sigma + 1) * std::abs(coupling_);
    minimum_ = point.boundary_gap ? *point.boundary_gap : point.mu - mu_c;
    if (!(minimum_ / mu_c >= kBoundaryGuard))
      throw Error(ErrorKind::DivergingIntegral, "mu within guard of mu_c at " + describe(point));
  }
  if (!(minimum_ > 0.0))
    throw Error(ErrorKind::DivergingIntegral, "non-positive integrand factor at " + describe(point));
}

double KappaFactor::operator()(double t) const {
  const double s = std::sin(t);
  const double s2 = s * s;
  const int sigma = params_.sigma;
  if (params_.nu > 0.0) {
    // g = (mu + nu alpha^2s) + nu alpha^2s * sum_{j>=1} s^2j
    double tail = 0.0;
    double p = 1.0;
    for (int j = 1; j <= sigma; ++j) {
      p *= s2;
      tail += p;
    }
    return minimum_ + coupling_ * tail;
  }
  // g = (mu - mu_c) + |nu| alpha^2s * cos^2 t * sum_{k<sigma} (sigma - k) s^2k
  const double c = std::cos(t);
  double tail = 0.0;
  double p = 1.0;
  for (int k = 0; k < sigma; ++k) {
    tail += (sigma - k) * p;
    p *= s2;
  }
  return minimum_ + std::abs(coupling_) * c * c * tail;
}

double KappaFactor::power_sum(double t) const {
  const double s = std::sin(t);
  return power_sum_from(s * s, params_.sigma);
}

WavelengthResult wavelength(const ParamPoint& point, const ModelParams& params) {
  const KappaFactor g(point, params);
  const auto r = quad::integrate<3>(
      [&g](double t) {
        const double gv = g(t);
        const double inv_sqrt = 1.0 / std::sqrt(gv);
        const double inv_32 = inv_sqrt / gv;
        return std::array<double, 3>{inv_sqrt, inv_32, g.power_sum(t) * inv_32};
      },
      0.0, kHalfPi);
  const int sigma = params.sigma;
  WavelengthResult out;
  out.lambda = 4.0 * r.value[0];
  out.d_mu = -2.0 * r.value[1];
  out.d_alpha = -4.0 * sigma * params.nu * std::pow(point.alpha, 2 * sigma - 1) * r.value[2];
  out.est_error = 4.0 * r.est_error[0];
  return out;
}

double wavelength_value(const ParamPoint& point, const ModelParams& params) {
  const KappaFactor g(point, params);
  return 4.0 * phase_integral(g, kHalfPi);
}

WavelengthGradient wavelength_gradient(const ParamPoint& point, const ModelParams& params) {
  const auto w = wavelength(point, params);
  return {w.d_mu, w.d_alpha};
}

double phase_integral(const KappaFactor& factor, double theta) {
  const auto r = quad::integrate<1>([&factor](double t) { return std::array<double, 1>{1.0 / std::sqrt(factor(t))}; },
                                    0.0, theta);
  return r.value[0];
}

MuZeroConstants constants_c(const ModelParams& params) {
  const int sigma = params.sigma;
  quad::Tolerance tol;
  tol.abs = 1e-15;
  tol.rel = 1e-14;
  // With w = sin t: c1 = int S^(-1/2) dt and c2 = int S^(-3/2) dt,
  // S(w) = (1 - w^(2(sigma+1))) / (1 - w^2).
  const auto r = quad::integrate<2>(
      [sigma](double t) {
        const double s = std::sin(t);
        const double S = power_sum_from(s * s, sigma);
        const double inv = 1.0 / std::sqrt(S);
        return std::array<double, 2>{inv, inv / S};
      },
      0.0, kHalfPi, tol);
  return MuZeroConstants{r.value[0], r.value[1], r.value[1] / r.value[0]};
}

MuZeroWavelength mu_zero_wavelength(double alpha, const ModelParams& params) {
  if (!(params.nu > 0.0)) throw Error(ErrorKind::OutsideRegion, "mu = 0 lies outside P for nu < 0");
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be positive");
  const auto c = constants_c(params);
  const int sigma = params.sigma;
  const double nu = params.nu;
  MuZeroWavelength out;
  out.lambda = 4.0 * c.c1 / std::sqrt(nu) * std::pow(alpha, -sigma);
  out.d_alpha = -4.0 * sigma * c.c1 / std::sqrt(nu) * std::pow(alpha, -(sigma + 1));
  out.d_mu = -2.0 * c.c2 * std::pow(nu, -1.5) * std::pow(alpha, -3 * sigma);
  return out;
}

}  // namespace nls
