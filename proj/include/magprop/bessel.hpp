#pragma once

#include <span>
#include <vector>

namespace magprop {

struct BesselEval {
  double order = 0.0;
  double argument = 0.0;
  double value = 0.0;
  double est_abs_err = 0.0;
};

/// J_nu(r) for real nu >= 0, r >= 0, with an error estimate.
///
/// Small arguments (r <= max(12, nu/2)) use the ascending series. Large
/// arguments relative to the order use the Hankel expansion; everything in
/// between goes through Miller's backward recurrence normalized by the
/// Neumann sum (r/2)^f = sum_k (f+2k) Gamma(f+k)/k! J_{f+2k}(r).
BesselEval bessel_j_eval(double nu, double r);
double bessel_j(double nu, double r);

/// J_{nu0+n}(r) for n = 0..out.size()-1 from a single recurrence pass.
void bessel_j_sequence(double nu0, double r, std::span<double> out);

/// (rho/2)^nu / Gamma(nu+1), an upper bound for |J_nu(rho)| when nu >= 0.
double term_tail_bound(double nu, double rho);

struct LandauScan {
  double constant = 0.0;  ///< sup |J_nu(r)| nu^{1/3}
  int argmax_order = 0;
  double argmax_argument = 0.0;
};

/// sup over nu in {1..nu_max} and r in r_grid of |J_nu(r)| nu^{1/3}.
LandauScan landau_scan(int nu_max, std::span<const double> r_grid);
double landau_bound_check(int nu_max, std::span<const double> r_grid);

namespace detail {
// Individual regimes, exposed for cross-checks.
BesselEval bessel_series(double nu, double r);
BesselEval bessel_miller(double nu, double r);
/// Returns est_abs_err = infinity when the expansion cannot reach 1e-15.
BesselEval bessel_hankel(double nu, double r);
}  // namespace detail

}  // namespace magprop
