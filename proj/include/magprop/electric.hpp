#pragma once

#include <vector>

#include "magprop/galerkin.hpp"
#include "magprop/potentials.hpp"

namespace magprop {

/// a_{c,j} = (1/pi) int a(t) cos(jt) dt.
double cos_fourier_coeff(const AngularPotential& p, int j);

/// a(pi - s) = a(pi + s), i.e. a is a pure cosine series.
bool is_symmetric_about_pi(const AngularPotential& p, double tol = 1e-10);

enum class Parity { Sin, Cos };
const char* to_string(Parity p);

/// Grid used for the corrector and eigenfunction samples at index k.
int electric_grid_size(const AngularPotential& p, int k);

/// First-order corrector phi_k: the solution in E_k of
///   -phi'' - k^2 phi = (a_tilde - a -+ a_{c,2k}/2) s_k,
/// with s_k = sin(kx) (upper sign) or cos(kx). Samples on the n-point grid.
std::vector<double> corrector(const AngularPotential& p, int k, Parity parity = Parity::Sin, int n = 0);

struct ElectricAsymptotics {
  int k = 0;
  Parity parity = Parity::Sin;
  double lambda_prediction = 0.0;  ///< k^2 + a_tilde -+ a_{c,2k}/2
  double lambda_corrected = 0.0;   ///< k^2 + a_tilde + lambda~ at the fixed point
  std::vector<double> varphi_k;
  std::vector<double> eigenfunction;  ///< s_k + phi_k + phi~_k
  double remainder_sup = 0.0;         ///< ||phi_k + phi~_k||_inf
  double eigen_residual = 0.0;        ///< ||-y'' + a y - lambda y||_inf
  int iterations = 0;
};

/// Second-stage contraction on E_k producing an eigenpair of -d^2 + a.
ElectricAsymptotics electric_eigenpair(const AngularPotential& p, int k, Parity parity);

/// Smallest k0 such that the contraction converges for every k in [k0, k_max];
/// k_max + 1 when even k_max fails.
int electric_threshold(const AngularPotential& p, Parity parity, int k_max = 64);

/// Fit of an eigenfunction (or a degenerate eigenspace) to
/// g^{-1} cos(omega (theta - theta_j)) / sqrt(pi), g = e^{i int_0^theta A}.
struct StandingWaveFit {
  int j = 0;          ///< label; the partner of j carries -j (integer) or -j-1 (half-integer)
  int index = -1;     ///< Galerkin eigenvalue index
  double theta = 0.0; ///< fitted shift theta_j in [0, pi/omega)
  double eigen_residual = 0.0;         ///< mu - a_tilde - omega^2
  double scaled_eigen_residual = 0.0;  ///< |j| |eigen_residual|
  double R_sup = 0.0;                  ///< ||R_j||_inf (sqrt(pi)-scaled, plain in reduce_nonsymmetric)
  double scaled_R_sup = 0.0;           ///< |j| R_sup
  bool degenerate = false;             ///< fitted inside a numerically degenerate cluster
  bool ambiguous = false;              ///< member is not close to a standing wave
};

/// Integer circulation with A = 0: fits the two eigenfunctions of the cluster
/// near a_tilde + j^2. The remainder is ||psi - cos(j(. - theta_j))/sqrt(pi)||_inf.
std::vector<StandingWaveFit> reduce_nonsymmetric(const AngularPotential& p, const SpectralDecomposition& spec, int j);

/// Integer circulation with a general A (the gauge is removed first).
std::vector<StandingWaveFit> integer_circulation_spectrum(const AngularPotential& p, const SpectralDecomposition& spec,
                                                          int j_min, int j_max);

/// Half-integer circulation: clusters near a_tilde + (j + 1/2)^2.
std::vector<StandingWaveFit> half_integer_spectrum(const AngularPotential& p, const SpectralDecomposition& spec,
                                                   int j_min, int j_max);

/// For A = 0 and a symmetric about theta_bar, the potential 4 a(2 theta + theta_bar).
AngularPotential doubled_potential(const AngularPotential& p, double theta_bar);

}  // namespace magprop
