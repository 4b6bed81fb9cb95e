#pragma once

#include <complex>
#include <span>
#include <vector>

namespace magprop {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Truncated Fourier series f(theta) = sum_{m=-M}^{M} c_m e^{i m theta}.
///
/// Coefficients follow c_m = (1/2pi) int f e^{-i m theta}. Modes outside
/// the stored range read as zero.
class FourierSeries {
 public:
  FourierSeries() : coeffs_(1, cplx(0.0)) {}
  explicit FourierSeries(int max_mode);
  /// coeffs[m + M] holds mode m; size must be odd.
  explicit FourierSeries(std::vector<cplx> coeffs);

  static FourierSeries constant(cplx value);
  static FourierSeries single_mode(int m, cplx value);

  /// Discrete Fourier coefficients of uniform samples theta_i = 2 pi i / n,
  /// keeping modes |m| <= max_mode. Requires n >= 2*max_mode + 1.
  static FourierSeries from_samples(std::span<const cplx> samples, int max_mode);
  static FourierSeries from_samples(std::span<const double> samples, int max_mode);

  int max_mode() const { return static_cast<int>(coeffs_.size() / 2); }
  cplx operator[](int m) const;
  cplx& at(int m);
  const std::vector<cplx>& coefficients() const { return coeffs_; }

  cplx mean() const { return (*this)[0]; }
  cplx operator()(double theta) const;

  /// Values on the uniform grid with n points. Modes above n/2 alias.
  std::vector<cplx> sample(int n) const;

  FourierSeries derivative() const;
  /// Zero-mean G with G' = f - mean(f).
  FourierSeries antiderivative() const;
  FourierSeries conj() const;
  FourierSeries resized(int max_mode) const;
  /// Drops trailing modes whose coefficients are below tol in modulus.
  FourierSeries trimmed(double tol = 0.0) const;

  /// Largest |Im f(theta)| bound from conjugate-symmetry defects.
  double imag_defect() const;
  double l1_coeff_norm() const;

  FourierSeries& operator+=(const FourierSeries& o);
  FourierSeries& operator-=(const FourierSeries& o);
  FourierSeries& operator*=(cplx s);

  friend FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
  friend FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
  friend FourierSeries operator*(FourierSeries a, cplx s) { return a *= s; }
  friend FourierSeries operator*(cplx s, FourierSeries a) { return a *= s; }
  /// Exact product (coefficient convolution).
  friend FourierSeries operator*(const FourierSeries& a, const FourierSeries& b);

 private:
  std::vector<cplx> coeffs_;
};

/// Uniform periodic grid helpers backed by an FFT.
namespace grid {

std::vector<double> nodes(int n);

/// c[k] for k = 0..n-1 with c_m stored at index (m mod n).
std::vector<cplx> forward(std::span<const cplx> samples);
std::vector<cplx> inverse(std::span<const cplx> coeffs);

/// Signed mode carried by FFT index k on an n-point grid.
inline int mode_of(int k, int n) { return k <= n / 2 ? k : k - n; }

std::vector<cplx> derivative(std::span<const cplx> samples);
/// Samples of G - G(0) with G' = f - mean(f); mean(f) returned through `mean`.
std::vector<cplx> antiderivative_from_zero(std::span<const cplx> samples, cplx* mean = nullptr);

double sup_norm(std::span<const cplx> samples);
/// sqrt((2pi/n) sum |f|^2), the L2 norm on the circle.
double l2_norm(std::span<const cplx> samples);
/// (2pi/n) sum f conj(g).
cplx inner(std::span<const cplx> f, std::span<const cplx> g);

int next_pow2(int n);

}  // namespace grid

}  // namespace magprop
