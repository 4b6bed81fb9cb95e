#pragma once

#include <cmath>

// Ascending series for J_nu(r) with the sum carried in binary128. The
// prefactor (r/2)^nu / Gamma(nu+1) is evaluated in long double; it multiplies
// the whole sum, so its relative error passes through unchanged. Cancellation
// costs about r/ln(10) digits, so this is trusted for r <= 40.
inline long double oracle_bessel_j(double nu, double r) {
  if (r == 0.0) return nu == 0.0 ? 1.0L : 0.0L;
  const long double x = 0.5L * r;
  const long double pref = std::exp(static_cast<long double>(nu) * std::log(x) - std::lgamma(static_cast<long double>(nu) + 1.0L));
  __float128 term = 1, sum = 1;
  const __float128 x2 = static_cast<__float128>(x) * static_cast<__float128>(x);
  for (int k = 0; k < 400; ++k) {
    term *= -x2 / (static_cast<__float128>(k + 1) * (static_cast<__float128>(nu) + k + 1));
    sum += term;
  }
  return pref * static_cast<long double>(sum);
}
