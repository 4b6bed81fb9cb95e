#pragma once

#include <Eigen/Dense>
#include <vector>

#include "magprop/fourier.hpp"
#include "magprop/potentials.hpp"

namespace magprop {

/// Eigenpairs of the truncated angular operator
///   L phi = -phi'' + (a + A^2 - i A') phi - 2i A phi'
/// in the orthonormal basis e^{i j theta}/sqrt(2 pi), j = -M..M.
struct SpectralDecomposition {
  int truncation = 0;
  std::vector<double> eigenvalues;  ///< ascending
  Eigen::MatrixXcd eigenvectors;    ///< column k; row j + M holds the coefficient of e^{ij theta}/sqrt(2pi)
  /// Leading eigenpairs certified against a larger truncation. Zero means
  /// uncertified (raw eigensolve of a matrix).
  int resolved_count = 0;

  int dimension() const { return static_cast<int>(eigenvalues.size()); }
  /// psi_k as a Fourier series in the e^{i m theta} convention.
  FourierSeries eigenfunction(int k) const;
  std::vector<cplx> eigenfunction_samples(int k, int n) const;
};

inline constexpr double kDegeneracyGap = 1e-8;
inline constexpr double kResolvedRelTol = 1e-9;

Eigen::MatrixXcd assemble_matrix(const AngularPotential& p, int M);

/// Dense Hermitian eigendecomposition; eigenvectors phase-fixed and, inside
/// numerically degenerate clusters, canonicalized.
SpectralDecomposition eigensolve(const Eigen::MatrixXcd& matrix);

/// Assembles at M, solves, and certifies against M' = ceil(1.5 M).
/// Reflection-symmetric problems (A = 0, a even) are solved per parity block so
/// that every eigenvector is a pure cosine or pure sine series.
SpectralDecomposition solve_spectrum(const AngularPotential& p, int M);

/// Default truncation for a potential: 64, or more for wide bandwidths.
int default_truncation(const AngularPotential& p);

struct AbMode {
  int k = 0;
  double eigenvalue = 0.0;
  FourierSeries eigenfunction;
};

/// Closed-form pairs ((k + alpha)^2, e^{ik theta}/sqrt(2pi)) for k in [k_min, k_max].
std::vector<AbMode> ab_reference(double alpha, int k_min, int k_max);

struct ClusterRow {
  int k = 0;
  double radius_without_c = 0.0;  ///< sqrt(abar + 4 k^2 Abar^2)
  double min_c = 0.0;             ///< smallest c capturing the two nearest eigenvalues
  int count_in_ball = 0;          ///< eigenvalues inside the ball at the reported c
};

struct ClusterReport {
  int k_min = 0;
  int k_max = 0;
  double abar = 0.0;  ///< ||a + Abar^2||_inf^2
  double c = 0.0;     ///< smallest c that works for every k in range
  bool exactly_two = false;
  bool disjoint = false;
  std::vector<ClusterRow> rows;
  bool passed() const { return exactly_two && disjoint; }
};

/// Kato-ball check on [k_min, k_max]; k_max <= 0 means "as far as resolved".
ClusterReport cluster_check(const SpectralDecomposition& spec, const AngularPotential& p, int k_min,
                            int k_max = 0);

/// Index of the eigenvalue nearest to `target`.
int nearest_eigenvalue(const SpectralDecomposition& spec, double target);

}  // namespace magprop
