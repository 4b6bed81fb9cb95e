#include "magprop/potentials.hpp"

#include <algorithm>
#include <cmath>

#include "magprop/error.hpp"
#include "magprop/galerkin.hpp"

namespace magprop {

namespace {

FourierSeries symmetrized(const FourierSeries& f, const char* name) {
  const double scale = 1.0 + f.l1_coeff_norm();
  if (f.imag_defect() > 1e-12 * scale)
    throw Error(ErrorKind::InvalidInput, std::string(name) + " coefficients are not conjugate-symmetric");
  const int M = f.max_mode();
  FourierSeries s(M);
  for (int m = -M; m <= M; ++m) s.at(m) = 0.5 * (f[m] + std::conj(f[-m]));
  return s.trimmed(0.0);
}

}  // namespace

AngularPotential AngularPotential::from_coefficients(FourierSeries a, FourierSeries A) {
  for (const auto* f : {&a, &A})
    for (const auto& c : f->coefficients())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  AngularPotential p;
  p.a_ = symmetrized(a, "a");
  p.A_ = symmetrized(A, "A");
  p.a_tilde_ = p.a_[0].real();
  p.A_tilde_ = p.A_[0].real();

  const double t = p.A_tilde_;
  const double half_dist = std::abs(t + 0.5 - std::round(t + 0.5));
  if (half_dist <= kResonanceTol) {
    // Pin the half-integer case to -1/2 so the class is stable under round-off.
    p.winding_ = static_cast<long>(std::llround(t + 0.5));
  } else {
    p.winding_ = static_cast<long>(std::floor(t + 0.5));
  }
  p.A_bar_ = t - static_cast<double>(p.winding_);
  return p;
}

AngularPotential AngularPotential::aharonov_bohm(double alpha, double a_const) {
  return from_coefficients(FourierSeries::constant(a_const), FourierSeries::constant(alpha));
}

bool AngularPotential::magnetic_is_constant(double tol) const {
  for (int m = 1; m <= A_.max_mode(); ++m)
    if (std::abs(A_[m]) > tol) return false;
  return true;
}

FourierSeries AngularPotential::zeroth_order_term() const {
  FourierSeries q = a_ + A_ * A_;
  q -= A_.derivative() * cplx(0.0, 1.0);
  return q;
}

std::vector<double> AngularPotential::magnetic_phase(int n) const {
  if (n < 2 * A_.max_mode() + 1) throw Error(ErrorKind::InvalidInput, "grid too coarse for magnetic potential");
  const auto G = A_.antiderivative().sample(n);
  const auto theta = grid::nodes(n);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = A_tilde_ * theta[k] + (G[k] - G[0]).real();
  }
  return out;
}

double AngularPotential::magnetic_phase(double theta) const {
  const auto G = A_.antiderivative();
  return A_tilde_ * theta + (G(theta) - G(0.0)).real();
}

std::array<double, 2> AngularPotential::vector_field(double theta) const {
  const double v = A_(theta).real();
  return {-v * std::sin(theta), v * std::cos(theta)};
}

AngularPotential build_potential(std::span<const double> a_samples, std::span<const double> A_samples,
                                 int n_modes) {
  if (n_modes < 1) throw Error(ErrorKind::InvalidInput, "n_modes must be at least 1");
  for (auto s : {a_samples, A_samples}) {
    if (s.size() < 2 * static_cast<std::size_t>(n_modes) + 1)
      throw Error(ErrorKind::InvalidInput, "need at least 2*n_modes+1 samples");
    for (double v : s)
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite sample");
  }
  return AngularPotential::from_coefficients(FourierSeries::from_samples(a_samples, n_modes),
                                             FourierSeries::from_samples(A_samples, n_modes));
}

const char* to_string(ResonanceClass c) {
  switch (c) {
    case ResonanceClass::NonResonant: return "NonResonant";
    case ResonanceClass::IntegerCirculation: return "IntegerCirculation";
    case ResonanceClass::HalfIntegerCirculation: return "HalfIntegerCirculation";
  }
  return "Unknown";
}

double resonance_distance(const AngularPotential& p) {
  const double twice = 2.0 * p.A_tilde();
  return 0.5 * std::abs(twice - std::round(twice));
}

ResonanceClass classify_resonance(const AngularPotential& p) {
  const double t = p.A_tilde();
  if (std::abs(t - std::round(t)) <= kResonanceTol) return ResonanceClass::IntegerCirculation;
  if (std::abs(t + 0.5 - std::round(t + 0.5)) <= kResonanceTol) return ResonanceClass::HalfIntegerCirculation;
  return ResonanceClass::NonResonant;
}

namespace {
std::vector<cplx> apply_gauge(const AngularPotential& p, std::span<const cplx> phi, double sign) {
  const int n = static_cast<int>(phi.size());
  const auto phase = p.magnetic_phase(n);
  const auto theta = grid::nodes(n);
  std::vector<cplx> out(phi.begin(), phi.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= std::polar(1.0, sign * (phase[i] - p.A_bar() * theta[i]));
  return out;
}
}  // namespace

std::vector<cplx> gauge_transform(const AngularPotential& p, std::span<const cplx> phi) {
  return apply_gauge(p, phi, 1.0);
}

std::vector<cplx> inverse_gauge_transform(const AngularPotential& p, std::span<const cplx> phi) {
  return apply_gauge(p, phi, -1.0);
}

HypothesisReport check_hypotheses(const AngularPotential& p, const SpectralDecomposition& spectrum) {
  HypothesisReport r;
  r.mu1 = spectrum.eigenvalues.empty() ? 0.0 : spectrum.eigenvalues.front();
  // Eigenvalues carry round-off of order eps * ||H||; a zero eigenvalue must not
  // pass as positive.
  const double floor = 1e-10;
  r.mu1_positive = r.mu1 > floor;
  r.hardy_condition = r.mu1 > floor;
  r.A_bar = p.A_bar();
  return r;
}

}  // namespace magprop
