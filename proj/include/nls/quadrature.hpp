#pragma once

#include "nls/gauss_legendre.hpp"
#include "nls/model.hpp"

namespace nls {

/// Relative distance to mu_0 (P+-) or mu_c (P-) below which the wavelength
/// integral is reported as diverging instead of evaluated.
inline constexpr double kBoundaryGuard = 1e-12;

/// Non-singular factor of the wavelength integrand,
///   g(u) = mu + nu alpha^(2 sigma) sum_{j=0}^{sigma} u^(2j),
/// so that kappa(w) = g(w)^(-1/2) (1 - w^2)^(-1/2). Evaluated on the sine
/// substitution w = sin t, in a cancellation-free form for each region.
class KappaFactor {
 public:
  /// Throws OutsideRegion for Outside points and DivergingIntegral when the
  /// point sits within kBoundaryGuard of the diverging boundary.
  KappaFactor(const ParamPoint& point, const ModelParams& params);

  double operator()(double t) const;

  /// sum_{j=0}^{sigma} sin(t)^(2j)
  double power_sum(double t) const;

  /// Minimum of g over [0, 1]; g(0) for nu > 0 and g(1) for nu < 0.
  double minimum() const noexcept { return minimum_; }

  const ParamPoint& point() const noexcept { return point_; }
  const ModelParams& params() const noexcept { return params_; }

  /// nu alpha^(2 sigma)
  double coupling() const noexcept { return coupling_; }

 private:
  ParamPoint point_;
  ModelParams params_;
  double coupling_ = 0.0;
  double minimum_ = 0.0;
};

struct WavelengthResult {
  double lambda = 0.0;
  double d_mu = 0.0;
  double d_alpha = 0.0;
  double est_error = 0.0;
};

/// lambda = 4 int_0^1 kappa(w) dw together with both partial derivatives.
WavelengthResult wavelength(const ParamPoint& point, const ModelParams& params);

/// Wavelength only (no derivative integrals).
double wavelength_value(const ParamPoint& point, const ModelParams& params);

struct WavelengthGradient {
  double d_mu = 0.0;
  double d_alpha = 0.0;
};

WavelengthGradient wavelength_gradient(const ParamPoint& point, const ModelParams& params);

/// Phase integral X(theta) = int_0^theta g(sin t)^(-1/2) dt. X(pi/2) = lambda / 4.
double phase_integral(const KappaFactor& factor, double theta);

struct MuZeroWavelength {
  double lambda = 0.0;
  double d_alpha = 0.0;
  double d_mu = 0.0;
};

/// Closed forms at mu = 0 (requires nu > 0):
///   lambda = 4 c1 nu^(-1/2) alpha^(-sigma)
///   d_alpha lambda = -4 sigma c1 nu^(-1/2) alpha^(-(sigma+1))
///   d_mu lambda = -2 c2 nu^(-3/2) alpha^(-3 sigma)
MuZeroWavelength mu_zero_wavelength(double alpha, const ModelParams& params);

struct MuZeroConstants {
  double c1 = 0.0;  // int_0^1 (1 - w^(2(sigma+1)))^(-1/2) dw
  double c2 = 0.0;  // int_0^1 (1 - w^(2(sigma+1)))^(-3/2) (1 - w^2) dw
  double c3 = 0.0;  // c2 / c1
};

MuZeroConstants constants_c(const ModelParams& params);

}  // namespace nls
