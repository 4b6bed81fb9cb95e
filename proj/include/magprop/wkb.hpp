#pragma once

#include <vector>

#include "magprop/galerkin.hpp"
#include "magprop/potentials.hpp"

namespace magprop {

/// Periodic solution W of  -i W' + 2 kappa W + W^2 = a_tilde - a,  kappa = sqrt(lambda - a_tilde),
/// with the phase S(theta) = kappa theta + int_0^theta W.
struct WkbSolution {
  double lambda = 0.0;
  double kappa = 0.0;
  std::vector<cplx> W;  ///< samples on the uniform grid
  std::vector<cplx> S;
  double fp_residual = 0.0;   ///< sup |T(W) - W| at termination
  cplx mean_W;                ///< (1/2pi) int W
  double ode_residual = 0.0;  ///< sup of the Riccati residual
  int iterations = 0;
};

/// Grid used by the WKB routines: 4x the potential bandwidth, at least 256.
int wkb_grid_size(const AngularPotential& p);
/// 0.1 dist(A_bar, Z/2).
double default_delta(const AngularPotential& p);

/// One application of the contraction map T_lambda to samples of W.
std::vector<cplx> apply_contraction(const AngularPotential& p, double lambda, const std::vector<cplx>& W);

/// Picard iteration from W = 0 until the sup-change is below tol.
/// Throws ResonantParameter when dist(kappa, Z/2) < delta, NoConvergence when
/// the map does not contract at this lambda.
WkbSolution fixed_point(const AngularPotential& p, double lambda, double tol, double delta);

/// Smallest lambda on the probe ladder kappa = n/2 + 1/4 from which the
/// iteration converges for four consecutive probes.
double effective_lambda(const AngularPotential& p, double tol = 1e-12);

enum class Branch { Plus, Minus };
const char* to_string(Branch b);

struct AsymptoticEigenpair {
  int j = 0;  ///< signed index: +k on the plus branch, -k on the minus branch
  double lambda_j = 0.0;
  Branch branch = Branch::Plus;
  std::vector<cplx> phi;  ///< normalized eigenfunction of the original operator
  double predicted_lambda = 0.0;
  WkbSolution wkb;
  int scalar_iterations = 0;
};

/// Solves sqrt(lambda - a_tilde) = +-A_bar - mean W_lambda + k for k >= 1.
AsymptoticEigenpair solve_eigenvalue(const AngularPotential& p, int k, Branch branch, double tol = 1e-13);

struct ResidualRow {
  int j = 0;
  int index = -1;  ///< paired Galerkin eigenvalue index
  double eigen_residual = 0.0;         ///< mu - a_tilde - (j + A_bar)^2
  double scaled_eigen_residual = 0.0;  ///< j^2 |eigen_residual|
  double R_sup = 0.0;                  ///< ||R_j||_inf
  double scaled_R_sup = 0.0;           ///< |j|^3 ||R_j||_inf
  bool ambiguous = false;
};

/// Residuals of the Galerkin eigenpairs against the asymptotic formulas for
/// every j with j_min <= |j| <= j_max (both signs).
std::vector<ResidualRow> asymptotic_residuals(const AngularPotential& p, const SpectralDecomposition& spec,
                                              int j_min, int j_max);

/// |<f, g>| / (|f| |g|) turned into an angle, on the uniform grid.
double subspace_angle(const std::vector<cplx>& f, const std::vector<cplx>& g);

/// Multiplies by the unit phase that makes the largest Fourier coefficient real positive.
void fix_phase_samples(std::vector<cplx>& f);

}  // namespace magprop
