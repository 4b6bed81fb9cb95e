#include "magprop/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/FFT>

#include "magprop/error.hpp"

namespace magprop {

FourierSeries::FourierSeries(int max_mode) {
  if (max_mode < 0) throw Error(ErrorKind::InvalidInput, "negative max_mode");
  coeffs_.assign(2 * static_cast<std::size_t>(max_mode) + 1, cplx(0.0));
}

FourierSeries::FourierSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 != 1) throw Error(ErrorKind::InvalidInput, "coefficient list must have odd length");
}

FourierSeries FourierSeries::constant(cplx value) {
  FourierSeries f(0);
  f.coeffs_[0] = value;
  return f;
}

FourierSeries FourierSeries::single_mode(int m, cplx value) {
  FourierSeries f(std::abs(m));
  f.at(m) = value;
  return f;
}

FourierSeries FourierSeries::from_samples(std::span<const cplx> samples, int max_mode) {
  const int n = static_cast<int>(samples.size());
  if (max_mode < 0 || n < 2 * max_mode + 1)
    throw Error(ErrorKind::InvalidInput, "too few samples for requested modes");
  const auto c = grid::forward(samples);
  FourierSeries f(max_mode);
  for (int m = -max_mode; m <= max_mode; ++m) f.at(m) = c[(m % n + n) % n];
  return f;
}

FourierSeries FourierSeries::from_samples(std::span<const double> samples, int max_mode) {
  std::vector<cplx> z(samples.begin(), samples.end());
  return from_samples(std::span<const cplx>(z), max_mode);
}

cplx FourierSeries::operator[](int m) const {
  const int M = max_mode();
  if (m < -M || m > M) return cplx(0.0);
  return coeffs_[static_cast<std::size_t>(m + M)];
}

cplx& FourierSeries::at(int m) {
  const int M = max_mode();
  if (m < -M || m > M) throw Error(ErrorKind::InvalidInput, "mode out of range");
  return coeffs_[static_cast<std::size_t>(m + M)];
}

cplx FourierSeries::operator()(double theta) const {
  const int M = max_mode();
  cplx sum(0.0);
  for (int m = -M; m <= M; ++m) sum += (*this)[m] * std::polar(1.0, m * theta);
  return sum;
}

std::vector<cplx> FourierSeries::sample(int n) const {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "grid size must be positive");
  std::vector<cplx> c(static_cast<std::size_t>(n), cplx(0.0));
  const int M = max_mode();
  for (int m = -M; m <= M; ++m) c[static_cast<std::size_t>((m % n + n) % n)] += (*this)[m];
  return grid::inverse(c);
}

FourierSeries FourierSeries::derivative() const {
  FourierSeries d(*this);
  const int M = max_mode();
  for (int m = -M; m <= M; ++m) d.at(m) *= cplx(0.0, m);
  return d;
}

FourierSeries FourierSeries::antiderivative() const {
  FourierSeries g(*this);
  const int M = max_mode();
  g.at(0) = 0.0;
  for (int m = -M; m <= M; ++m)
    if (m != 0) g.at(m) /= cplx(0.0, m);
  return g;
}

FourierSeries FourierSeries::conj() const {
  const int M = max_mode();
  FourierSeries c(M);
  for (int m = -M; m <= M; ++m) c.at(m) = std::conj((*this)[-m]);
  return c;
}

FourierSeries FourierSeries::resized(int max_mode) const {
  FourierSeries r(max_mode);
  for (int m = -max_mode; m <= max_mode; ++m) r.at(m) = (*this)[m];
  return r;
}

FourierSeries FourierSeries::trimmed(double tol) const {
  int M = max_mode();
  while (M > 0 && std::abs((*this)[M]) <= tol && std::abs((*this)[-M]) <= tol) --M;
  return resized(M);
}

double FourierSeries::imag_defect() const {
  const int M = max_mode();
  double d = 0.0;
  for (int m = 0; m <= M; ++m) d += std::abs((*this)[m] - std::conj((*this)[-m]));
  return d;
}

double FourierSeries::l1_coeff_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::abs(c);
  return s;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& o) {
  if (o.max_mode() > max_mode()) *this = resized(o.max_mode());
  for (int m = -o.max_mode(); m <= o.max_mode(); ++m) at(m) += o[m];
  return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& o) {
  if (o.max_mode() > max_mode()) *this = resized(o.max_mode());
  for (int m = -o.max_mode(); m <= o.max_mode(); ++m) at(m) -= o[m];
  return *this;
}

FourierSeries& FourierSeries::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FourierSeries operator*(const FourierSeries& a, const FourierSeries& b) {
  const int Ma = a.max_mode(), Mb = b.max_mode();
  FourierSeries p(Ma + Mb);
  for (int i = -Ma; i <= Ma; ++i) {
    const cplx ai = a[i];
    if (ai == cplx(0.0)) continue;
    for (int j = -Mb; j <= Mb; ++j) p.at(i + j) += ai * b[j];
  }
  return p;
}

namespace grid {

namespace {
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}
}  // namespace

std::vector<double> nodes(int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = kTwoPi * i / n;
  return t;
}

std::vector<cplx> forward(std::span<const cplx> samples) {
  std::vector<cplx> in(samples.begin(), samples.end()), out;
  engine().fwd(out, in);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<cplx> inverse(std::span<const cplx> coeffs) {
  std::vector<cplx> in(coeffs.begin(), coeffs.end()), out;
  engine().inv(out, in);
  const double scale = static_cast<double>(coeffs.size());
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<cplx> derivative(std::span<const cplx> samples) {
  const int n = static_cast<int>(samples.size());
  auto c = forward(samples);
  for (int k = 0; k < n; ++k) {
    const int m = mode_of(k, n);
    // The Nyquist mode has no consistent real derivative; drop it.
    c[static_cast<std::size_t>(k)] *= (n % 2 == 0 && k == n / 2) ? cplx(0.0) : cplx(0.0, m);
  }
  return inverse(c);
}

std::vector<cplx> antiderivative_from_zero(std::span<const cplx> samples, cplx* mean) {
  const int n = static_cast<int>(samples.size());
  auto c = forward(samples);
  if (mean) *mean = c[0];
  c[0] = 0.0;
  for (int k = 1; k < n; ++k) {
    const int m = mode_of(k, n);
    c[static_cast<std::size_t>(k)] /= cplx(0.0, m);
  }
  if (n % 2 == 0) c[static_cast<std::size_t>(n / 2)] = 0.0;
  auto g = inverse(c);
  const cplx g0 = g[0];
  for (auto& v : g) v -= g0;
  return g;
}

double sup_norm(std::span<const cplx> samples) {
  double s = 0.0;
  for (const auto& v : samples) s = std::max(s, std::abs(v));
  return s;
}

double l2_norm(std::span<const cplx> samples) {
  double s = 0.0;
  for (const auto& v : samples) s += std::norm(v);
  return std::sqrt(s * kTwoPi / static_cast<double>(samples.size()));
}

cplx inner(std::span<const cplx> f, std::span<const cplx> g) {
  cplx s(0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s * (kTwoPi / static_cast<double>(f.size()));
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace grid
}  // namespace magprop
