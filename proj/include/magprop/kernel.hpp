#pragma once

#include <iosfwd>
#include <vector>

#include "magprop/fourier.hpp"
#include "magprop/galerkin.hpp"
#include "magprop/potentials.hpp"

namespace magprop {

enum class EigenSource { Galerkin, ClosedFormAB };

/// Eigendata for the kernel
///   K(rho, theta, theta') = sum_k i^{-nu_k} J_{nu_k}(rho) psi_k(theta) conj(psi_k(theta')),
/// nu_k = sqrt(mu_k), with i^{-nu} = e^{-i pi nu / 2}.
struct KernelSpec {
  AngularPotential potential;
  EigenSource source = EigenSource::Galerkin;
  double alpha = 0.0;  ///< flux for ClosedFormAB
  double truncation_tol = 1e-10;

  std::vector<double> nu;            ///< ascending
  std::vector<FourierSeries> psi;    ///< L^2-normalized eigenfunctions
  std::vector<double> psi_sup;       ///< measured sup |psi_k|, with a 1e-3 safety factor
  std::vector<long> label;           ///< circulation label j with psi_j ~ e^{-i int A} e^{i(j + A_bar) theta}
  double sup_bound = 0.0;            ///< max of psi_sup, used for unresolved eigenpairs

  int size() const { return static_cast<int>(nu.size()); }
};

/// Kernel eigendata from the resolved part of a Galerkin decomposition.
KernelSpec make_kernel_spec(const AngularPotential& p, const SpectralDecomposition& spec, double truncation_tol);
/// Closed-form Aharonov-Bohm eigendata e^{ik theta}/sqrt(2 pi), |k| <= k_max.
KernelSpec ab_kernel_spec(double alpha, int k_max, double truncation_tol);

/// Number of terms needed at rho and the certified bound on what is left out.
struct Truncation {
  int terms = 0;
  double tail_bound = 0.0;
};
Truncation kernel_truncation(const KernelSpec& ks, double rho);

struct KernelValue {
  cplx value;
  int terms_used = 0;
  double tail_bound = 0.0;
};

KernelValue eval_kernel(const KernelSpec& ks, double rho, double theta, double theta_p);
/// Aharonov-Bohm kernel with a closed-form basis sized for rho, tail budget 1e-12.
cplx ab_kernel(double alpha, double rho, double theta, double theta_p);

/// i^{-nu} J_nu(rho) for every term kept at rho.
std::vector<cplx> kernel_coefficients(const KernelSpec& ks, double rho, Truncation* trunc = nullptr);

struct ScanPoint {
  double rho = 0.0, theta = 0.0, theta_p = 0.0;
  cplx value;
  int terms_used = 0;
  double tail_bound = 0.0;
};

struct WindowMax {
  double rho_lo = 0.0, rho_hi = 0.0;
  double max_abs = 0.0;
};

struct SupScanReport {
  double max_abs = 0.0;
  ScanPoint argmax;
  std::vector<ScanPoint> per_rho;  ///< argmax row for each rho in the grid
  std::vector<WindowMax> windows;  ///< running sup over [0, rho_max 10^{-d}], d = 0, 1, 2
  double window_variation = 0.0;   ///< growth of the running sup across the top decade, relative
  double max_tail_bound = 0.0;
};

struct ScanGrid {
  double rho_max = 50.0;
  int n_rho = 200;
  int n_theta = 64;
  int n_theta_p = 64;
};

/// rho_i = i rho_max / n_rho for i = 0..n_rho, theta on the uniform periodic grid.
SupScanReport sup_scan(const KernelSpec& ks, const ScanGrid& grid);

struct DifferenceRow {
  int ell = 0;
  double max_abs = 0.0;
  double rho_at_max = 0.0;
  int pairs = 0;  ///< number of labels |j| >= ell that entered
};

/// max over the grid of |e^{i(G(theta)-G(theta'))} sum_{|j|>=ell} term_j - e^{i A_bar (theta-theta')} sum_{|j|>=ell} term^{ab}_j|,
/// G = int_0^theta A, with the Aharonov-Bohm terms taken at flux A_bar over the same labels.
std::vector<DifferenceRow> difference_scan(const KernelSpec& ks, const ScanGrid& grid, const std::vector<int>& ells);

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& rows);

}  // namespace magprop
