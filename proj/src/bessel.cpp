#include "magprop/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magprop/error.hpp"
#include "magprop/fourier.hpp"

namespace magprop {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kBig = 1e200;
constexpr double kSmall = 1e-200;

void validate(double nu, double r) {
  if (!std::isfinite(nu) || !std::isfinite(r)) throw Error(ErrorKind::InvalidInput, "non-finite Bessel argument");
  if (nu < 0.0) throw Error(ErrorKind::UnsupportedOrder, "negative Bessel order");
  if (r < 0.0) throw Error(ErrorKind::InvalidInput, "negative Bessel argument");
}

int miller_start(double top_order, double r) {
  return static_cast<int>(std::ceil(std::max(top_order, r) + 12.0 * std::cbrt(r) + 30.0));
}

// Neumann weights for (r/2)^f = sum_k w_k J_{f+2k}(r).
std::vector<double> neumann_weights(double f, int kmax) {
  std::vector<double> w(static_cast<std::size_t>(kmax) + 1);
  w[0] = std::tgamma(f + 1.0);
  double g = std::tgamma(f + 1.0);  // Gamma(f+k)/k! at k = 1
  for (int k = 1; k <= kmax; ++k) {
    w[static_cast<std::size_t>(k)] = (f + 2.0 * k) * g;
    g *= (f + k) / (k + 1.0);
  }
  return w;
}

}  // namespace

namespace detail {

BesselEval bessel_series(double nu, double r) {
  BesselEval e{nu, r, 0.0, 0.0};
  if (r == 0.0) {
    e.value = nu == 0.0 ? 1.0 : 0.0;
    return e;
  }
  const double x = 0.5 * r;
  const double x2 = x * x;
  double term = std::exp(nu * std::log(x) - std::lgamma(nu + 1.0));
  double sum = term, sum_abs = std::abs(term);
  for (int k = 0; k < 2000; ++k) {
    term *= -x2 / ((k + 1.0) * (nu + k + 1.0));
    sum += term;
    sum_abs += std::abs(term);
    if (k + 1 > x && std::abs(term) <= 0.25 * kEps * std::abs(sum)) break;
    if (term == 0.0) break;
  }
  e.value = sum;
  e.est_abs_err = 4.0 * kEps * sum_abs + std::numeric_limits<double>::denorm_min();
  return e;
}

BesselEval bessel_hankel(double nu, double r) {
  BesselEval e{nu, r, 0.0, std::numeric_limits<double>::infinity()};
  if (r <= 0.0) return e;
  const double mu = 4.0 * nu * nu;
  double a = 1.0;  // a_k(nu) / r^k
  double P = 1.0, Q = 0.0;
  double prev = 1.0;
  double last = 1.0;
  bool converged = false;
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu - odd * odd) / (8.0 * k * r);
    const double mag = std::abs(a);
    if (mag > prev && k > nu) break;  // asymptotic series starts to diverge
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) P += sign * a; else Q += sign * a;
    prev = mag;
    last = mag;
    if (mag < 1e-17 || a == 0.0) {
      converged = true;
      break;
    }
  }
  const double amp = std::sqrt(2.0 / (kPi * r));
  // chi = r - phi expanded so that large r never goes through a rounded subtraction
  const double phi = (0.5 * nu + 0.25) * kPi;
  const double cr = std::cos(r), sr = std::sin(r), cp = std::cos(phi), sp = std::sin(phi);
  const double cos_chi = cr * cp + sr * sp;
  const double sin_chi = sr * cp - cr * sp;
  e.value = amp * (P * cos_chi - Q * sin_chi);
  const double trunc = converged ? 0.0 : last;
  e.est_abs_err = amp * (trunc + 4.0 * kEps * (1.0 + phi));
  if (!converged && last > 1e-15) e.est_abs_err = std::numeric_limits<double>::infinity();
  return e;
}

BesselEval bessel_miller(double nu, double r) {
  BesselEval e{nu, r, 0.0, 0.0};
  if (r == 0.0) {
    e.value = nu == 0.0 ? 1.0 : 0.0;
    return e;
  }
  const int n = static_cast<int>(std::floor(nu));
  const double f = nu - n;
  const int N = miller_start(nu, r) | 1;  // odd start keeps the even sum aligned
  const auto w = neumann_weights(f, N / 2 + 1);
  const double two_over_r = 2.0 / r;

  double Fp1 = 0.0, F = 1e-30;  // F_{m+1}, F_m
  double S = 0.0, S_abs = 0.0;
  double target = 0.0;
  for (int m = N; m >= 1; --m) {
    if (m % 2 == 0) {
      S += w[static_cast<std::size_t>(m / 2)] * F;
      S_abs += std::abs(w[static_cast<std::size_t>(m / 2)] * F);
    }
    const double Fm1 = two_over_r * (f + m) * F - Fp1;
    Fp1 = F;
    F = Fm1;
    if (m - 1 == n) target = F;
    if (std::abs(F) > kBig) {
      F *= kSmall;
      Fp1 *= kSmall;
      S *= kSmall;
      S_abs *= kSmall;
      target *= kSmall;
    }
  }
  S += w[0] * F;
  S_abs += std::abs(w[0] * F);
  const double norm = std::pow(0.5 * r, f) / S;
  e.value = target * norm;
  e.est_abs_err = 16.0 * kEps * std::sqrt(static_cast<double>(N)) * (S_abs / std::abs(S)) *
                  std::max(1.0, std::abs(e.value));
  return e;
}

}  // namespace detail

BesselEval bessel_j_eval(double nu, double r) {
  validate(nu, r);
  if (r == 0.0) return BesselEval{nu, r, nu == 0.0 ? 1.0 : 0.0, 0.0};
  if (r <= std::max(12.0, 0.5 * nu)) return detail::bessel_series(nu, r);
  if (r >= std::max(30.0, 0.5 * nu * nu)) {
    auto h = detail::bessel_hankel(nu, r);
    if (h.est_abs_err <= 1e-14) return h;
  }
  return detail::bessel_miller(nu, r);
}

double bessel_j(double nu, double r) { return bessel_j_eval(nu, r).value; }

void bessel_j_sequence(double nu0, double r, std::span<double> out) {
  validate(nu0, r);
  const int count = static_cast<int>(out.size());
  if (count == 0) return;
  if (r == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    if (nu0 == 0.0) out[0] = 1.0;
    return;
  }
  const int n0 = static_cast<int>(std::floor(nu0));
  const double f = nu0 - n0;
  const int top = n0 + count - 1;
  const int N = miller_start(top, r) | 1;
  const auto w = neumann_weights(f, N / 2 + 1);
  const double two_over_r = 2.0 / r;

  std::vector<double> stored(static_cast<std::size_t>(count), 0.0);
  std::vector<int> stored_scale(static_cast<std::size_t>(count), 0);
  int scale_count = 0;
  auto store = [&](int m, double v) {
    const int idx = m - n0;
    if (idx >= 0 && idx < count) {
      stored[static_cast<std::size_t>(idx)] = v;
      stored_scale[static_cast<std::size_t>(idx)] = scale_count;
    }
  };

  double Fp1 = 0.0, F = 1e-30;
  double S = 0.0;
  store(N, F);
  for (int m = N; m >= 1; --m) {
    if (m % 2 == 0) S += w[static_cast<std::size_t>(m / 2)] * F;
    const double Fm1 = two_over_r * (f + m) * F - Fp1;
    Fp1 = F;
    F = Fm1;
    if (std::abs(F) > kBig) {
      F *= kSmall;
      Fp1 *= kSmall;
      S *= kSmall;
      ++scale_count;
    }
    store(m - 1, F);
  }
  S += w[0] * F;
  const double norm = std::pow(0.5 * r, f) / S;
  for (int i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    double v = stored[k] * norm;
    for (int s = stored_scale[k]; s < scale_count && v != 0.0; ++s) v *= kSmall;
    out[k] = v;
  }
}

double term_tail_bound(double nu, double rho) {
  if (rho == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return std::exp(nu * std::log(0.5 * rho) - std::lgamma(nu + 1.0));
}

LandauScan landau_scan(int nu_max, std::span<const double> r_grid) {
  LandauScan best;
  if (nu_max < 1) return best;
  std::vector<double> J(static_cast<std::size_t>(nu_max));
  std::vector<double> weight(static_cast<std::size_t>(nu_max));
  for (int nu = 1; nu <= nu_max; ++nu) weight[static_cast<std::size_t>(nu - 1)] = std::cbrt(static_cast<double>(nu));
  for (double r : r_grid) {
    bessel_j_sequence(1.0, r, J);
    for (int i = 0; i < nu_max; ++i) {
      const double v = std::abs(J[static_cast<std::size_t>(i)]) * weight[static_cast<std::size_t>(i)];
      if (v > best.constant) best = LandauScan{v, i + 1, r};
    }
  }
  return best;
}

double landau_bound_check(int nu_max, std::span<const double> r_grid) {
  return landau_scan(nu_max, r_grid).constant;
}

}  // namespace magprop
