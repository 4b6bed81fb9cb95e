#pragma once

#include <array>
#include <span>
#include <vector>

#include "magprop/fourier.hpp"

namespace magprop {

struct SpectralDecomposition;

/// Tolerance deciding whether the circulation lies in (1/2)Z.
inline constexpr double kResonanceTol = 1e-9;

/// Electric potential a(theta) and tangential magnetic scalar A(theta) on the
/// circle, stored as truncated Fourier series. Both functions are real.
class AngularPotential {
 public:
  AngularPotential() = default;

  /// Rejects coefficient lists that are not conjugate-symmetric (beyond
  /// round-off); the stored series are symmetrized.
  static AngularPotential from_coefficients(FourierSeries a, FourierSeries A);
  /// a = a_const, A = alpha.
  static AngularPotential aharonov_bohm(double alpha, double a_const = 0.0);

  const FourierSeries& a() const { return a_; }
  const FourierSeries& A() const { return A_; }
  double a_tilde() const { return a_tilde_; }
  double A_tilde() const { return A_tilde_; }
  double A_bar() const { return A_bar_; }
  /// floor(A_tilde + 1/2), so that A_tilde = A_bar + winding().
  long winding() const { return winding_; }
  int bandwidth() const { return std::max(a_.max_mode(), A_.max_mode()); }

  bool magnetic_is_constant(double tol = 1e-14) const;
  double a_sup_bound() const { return a_.l1_coeff_norm(); }

  /// a + A^2 - i A', the zeroth-order coefficient of the angular operator.
  FourierSeries zeroth_order_term() const;

  /// Samples of int_0^theta A on the n-point uniform grid.
  std::vector<double> magnetic_phase(int n) const;
  double magnetic_phase(double theta) const;

  /// The planar field A(theta) (-sin theta, cos theta) on the unit circle.
  std::array<double, 2> vector_field(double theta) const;

 private:
  FourierSeries a_, A_;
  double a_tilde_ = 0.0, A_tilde_ = 0.0, A_bar_ = 0.0;
  long winding_ = 0;
};

AngularPotential build_potential(std::span<const double> a_samples, std::span<const double> A_samples,
                                 int n_modes);

enum class ResonanceClass { NonResonant, IntegerCirculation, HalfIntegerCirculation };

const char* to_string(ResonanceClass c);
ResonanceClass classify_resonance(const AngularPotential& p);
/// Distance of the circulation to (1/2)Z.
double resonance_distance(const AngularPotential& p);

/// phi(t) -> e^{-i A_bar t} e^{i int_0^t A} phi(t) on the uniform grid.
std::vector<cplx> gauge_transform(const AngularPotential& p, std::span<const cplx> phi);
/// Inverse of gauge_transform.
std::vector<cplx> inverse_gauge_transform(const AngularPotential& p, std::span<const cplx> phi);

struct HypothesisReport {
  double mu1 = 0.0;
  bool mu1_positive = false;
  /// mu1 > -((N-2)/2)^2, which for N = 2 is the same condition.
  bool hardy_condition = false;
  double A_bar = 0.0;
  bool passed() const { return mu1_positive && hardy_condition; }
};

HypothesisReport check_hypotheses(const AngularPotential& p, const SpectralDecomposition& spectrum);

}  // namespace magprop
