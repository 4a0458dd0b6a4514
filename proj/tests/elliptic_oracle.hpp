#pragma once

// Test-only closed forms for sigma = 1, where the wavelength is a complete
// elliptic integral of the first kind. Never used by the library itself.

#include <boost/math/special_functions/ellint_1.hpp>
#include <cmath>

namespace nls::test {

/// K(m) for parameter m < 1 (negative m via the imaginary-modulus transform).
inline double complete_k(double m) {
  if (m >= 0.0) return boost::math::ellint_1(std::sqrt(m));
  const double mp = -m / (1.0 - m);
  return boost::math::ellint_1(std::sqrt(mp)) / std::sqrt(1.0 - m);
}

/// lambda(mu, alpha) for sigma = 1:
///   4 int_0^{pi/2} (A + B sin^2 t)^(-1/2) dt,  A = mu + nu alpha^2, B = nu alpha^2
///   = 4 (A + B)^(-1/2) K(B / (A + B)).
inline double elliptic_wavelength_sigma1(double mu, double alpha, double nu) {
  const double B = nu * alpha * alpha;
  const double A = mu + B;
  return 4.0 / std::sqrt(A + B) * complete_k(B / (A + B));
}

/// c1 = int_0^1 (1 - w^(2(sigma+1)))^(-1/2) dw = B(1/(2(sigma+1)), 1/2) / (2(sigma+1)).
inline double beta_c1(int sigma) {
  const double p = 2.0 * (sigma + 1);
  return std::beta(1.0 / p, 0.5) / p;
}

}  // namespace nls::test
