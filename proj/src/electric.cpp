#include "magprop/electric.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

#include "magprop/error.hpp"

namespace magprop {

namespace {

void require_electric(const AngularPotential& p) {
  for (const auto& c : p.A().coefficients())
    if (std::abs(c) > 1e-14) throw Error(ErrorKind::InvalidInput, "purely electric potential expected (A = 0)");
}

void require_symmetric(const AngularPotential& p) {
  if (!is_symmetric_about_pi(p)) throw Error(ErrorKind::SymmetryViolation, "a is not symmetric about pi");
}

std::vector<double> trig_samples(int k, Parity parity, int n) {
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = kTwoPi * i / n;
    s[static_cast<std::size_t>(i)] = parity == Parity::Sin ? std::sin(k * x) : std::cos(k * x);
  }
  return s;
}

std::vector<double> real_samples(const FourierSeries& f, int n) {
  const auto z = f.sample(n);
  std::vector<double> r(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].real();
  return r;
}

// Solves -T'' - k^2 T = F on E_k: keeps the requested parity, drops the k-th
// mode and divides by m^2 - k^2.
std::vector<double> solve_on_Ek(const std::vector<double>& F, int k, Parity parity) {
  const int n = static_cast<int>(F.size());
  std::vector<cplx> z(F.begin(), F.end());
  auto c = grid::forward(z);
  std::vector<cplx> out(c.size(), cplx(0.0));
  for (int m = -(n / 2) + 1; m < n / 2; ++m) {
    if (std::abs(m) == k) continue;
    if (parity == Parity::Sin && m == 0) continue;
    const cplx cm = c[static_cast<std::size_t>((m + n) % n)];
    const cplx cn = c[static_cast<std::size_t>((-m + n) % n)];
    const cplx part = parity == Parity::Sin ? 0.5 * (cm - cn) : 0.5 * (cm + cn);
    out[static_cast<std::size_t>((m + n) % n)] = part / static_cast<double>(m * m - k * k);
  }
  const auto t = grid::inverse(out);
  std::vector<double> r(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].real();
  return r;
}

std::vector<double> second_derivative(const std::vector<double>& f) {
  std::vector<cplx> z(f.begin(), f.end());
  const auto d2 = grid::derivative(grid::derivative(z));
  std::vector<double> r(d2.size());
  for (std::size_t i = 0; i < d2.size(); ++i) r[i] = d2[i].real();
  return r;
}

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

double cos_fourier_coeff(const AngularPotential& p, int j) {
  if (j < 0) throw Error(ErrorKind::InvalidInput, "negative cosine index");
  if (j == 0) return 2.0 * p.a_tilde();
  return 2.0 * p.a()[j].real();
}

bool is_symmetric_about_pi(const AngularPotential& p, double tol) {
  double defect = 0.0;
  for (int m = 1; m <= p.a().max_mode(); ++m) defect += 2.0 * std::abs(p.a()[m].imag());
  return defect <= tol;
}

const char* to_string(Parity p) { return p == Parity::Sin ? "sin" : "cos"; }

int electric_grid_size(const AngularPotential& p, int k) {
  return std::max(256, grid::next_pow2(8 * (k + p.a().max_mode())));
}

std::vector<double> corrector(const AngularPotential& p, int k, Parity parity, int n) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");
  require_symmetric(p);
  const int bw = p.a().max_mode();
  if (n <= 0) n = electric_grid_size(p, k);
  if (n < 2 * (k + bw) + 2) throw Error(ErrorKind::InsufficientResolution, "grid too coarse for the corrector");

  std::vector<cplx> c(static_cast<std::size_t>(n), cplx(0.0));
  auto put = [&](int m, cplx v) { c[static_cast<std::size_t>((m % n + n) % n)] += v; };
  const double sign = parity == Parity::Sin ? -1.0 : 1.0;
  if (parity == Parity::Cos) put(0, cos_fourier_coeff(p, k) / (2.0 * k * k));
  for (int j = std::max(1, k - bw); j <= k + bw; ++j) {
    if (j == k) continue;
    const double num = cos_fourier_coeff(p, std::abs(k - j)) + sign * cos_fourier_coeff(p, k + j);
    const double b = 0.5 * num / static_cast<double>((k - j) * (k + j));
    if (parity == Parity::Sin) {
      put(j, b / cplx(0.0, 2.0));
      put(-j, -b / cplx(0.0, 2.0));
    } else {
      put(j, 0.5 * b);
      put(-j, 0.5 * b);
    }
  }
  const auto z = grid::inverse(c);
  std::vector<double> phi(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) phi[i] = z[i].real();

  const auto a = real_samples(p.a(), n);
  const auto s = trig_samples(k, parity, n);
  const auto d2 = second_derivative(phi);
  const double shift = sign * 0.5 * cos_fourier_coeff(p, 2 * k);
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto q = static_cast<std::size_t>(i);
    res = std::max(res, std::abs(-d2[q] - k * k * phi[q] - (p.a_tilde() - a[q] + shift) * s[q]));
  }
  if (res > 1e-8 * (1.0 + sup_abs(a))) throw Error(ErrorKind::InsufficientResolution, "corrector residual check failed");
  return phi;
}

ElectricAsymptotics electric_eigenpair(const AngularPotential& p, int k, Parity parity) {
  require_electric(p);
  const int n = electric_grid_size(p, k);
  ElectricAsymptotics out;
  out.k = k;
  out.parity = parity;
  out.varphi_k = corrector(p, k, parity, n);
  const double ac2k = cos_fourier_coeff(p, 2 * k);
  const double sgn = parity == Parity::Sin ? -1.0 : 1.0;
  out.lambda_prediction = k * k + p.a_tilde() + sgn * 0.5 * ac2k;

  const auto a = real_samples(p.a(), n);
  const auto s = trig_samples(k, parity, n);
  const double a_t = p.a_tilde();
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0), u(phi.size()), F(phi.size());

  auto lambda_tilde = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += a[i] * v[i] * s[i];
    return sgn * 0.5 * ac2k + acc * (kTwoPi / n) / kPi;
  };

  double prev = std::numeric_limits<double>::infinity();
  int growing = 0;
  bool done = false;
  double lt = 0.0;
  for (int it = 1; it <= 300; ++it) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = phi[i] + out.varphi_k[i];
    lt = lambda_tilde(u);
    for (std::size_t i = 0; i < F.size(); ++i) F[i] = (lt - sgn * 0.5 * ac2k) * s[i] + (lt + a_t - a[i]) * u[i];
    auto next = solve_on_Ek(F, k, parity);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - phi[i]));
    phi = std::move(next);
    out.iterations = it;
    if (!std::isfinite(change)) break;
    if (change <= 1e-14 * std::max(1.0, sup_abs(phi))) {
      done = true;
      break;
    }
    growing = change > prev ? growing + 1 : 0;
    if (growing >= 5) break;
    prev = change;
  }
  if (!done) throw Error(ErrorKind::NoConvergence, "contraction on E_k did not converge");

  for (std::size_t i = 0; i < u.size(); ++i) u[i] = phi[i] + out.varphi_k[i];
  lt = lambda_tilde(u);
  out.lambda_corrected = k * k + a_t + lt;
  out.eigenfunction.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out.eigenfunction[i] = s[i] + u[i];
  out.remainder_sup = sup_abs(u);
  const auto d2 = second_derivative(out.eigenfunction);
  double res = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double y = out.eigenfunction[i];
    res = std::max(res, std::abs(-d2[i] + a[i] * y - out.lambda_corrected * y));
  }
  out.eigen_residual = res;
  return out;
}

int electric_threshold(const AngularPotential& p, Parity parity, int k_max) {
  int k0 = k_max + 1;
  for (int k = k_max; k >= 1; --k) {
    try {
      electric_eigenpair(p, k, parity);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence) throw;
      break;
    }
    k0 = k;
  }
  return k0;
}

namespace {

struct ClusterSpec {
  double omega;
  int label;
  int partner_label;
  double scale;  // 1 for the sqrt(pi)-scaled remainder, 1/sqrt(pi) for the plain one
};

std::vector<StandingWaveFit> fit_cluster(const AngularPotential& p, const SpectralDecomposition& spec,
                                         const ClusterSpec& cs) {
  const double omega = cs.omega;
  const double target = p.a_tilde() + omega * omega;
  std::vector<int> order(static_cast<std::size_t>(spec.dimension()));
  for (int i = 0; i < spec.dimension(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::partial_sort(order.begin(), order.begin() + 3, order.end(), [&](int x, int y) {
    return std::abs(spec.eigenvalues[static_cast<std::size_t>(x)] - target) <
           std::abs(spec.eigenvalues[static_cast<std::size_t>(y)] - target);
  });
  std::array<int, 2> idx{std::min(order[0], order[1]), std::max(order[0], order[1])};
  if (spec.resolved_count > 0 && idx[1] >= spec.resolved_count)
    throw Error(ErrorKind::InsufficientResolution, "cluster lies beyond the resolved spectrum");

  const int n = std::max(512, grid::next_pow2(2 * spec.truncation + 2));
  const auto phase = p.magnetic_phase(n);
  const auto theta = grid::nodes(n);
  const double sqrt_pi = std::sqrt(kPi);
  std::vector<cplx> g(static_cast<std::size_t>(n)), ep(g.size()), em(g.size());
  for (int i = 0; i < n; ++i) {
    const auto q = static_cast<std::size_t>(i);
    g[q] = std::polar(1.0, phase[q]);
    ep[q] = std::polar(1.0, -omega * theta[q]);
    em[q] = std::polar(1.0, omega * theta[q]);
  }
  auto project = [&](const std::vector<cplx>& h, const std::vector<cplx>& e) {
    cplx s(0.0);
    for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * e[i];
    return s / static_cast<double>(h.size());
  };

  std::array<std::vector<cplx>, 2> h;
  for (int m = 0; m < 2; ++m) {
    const auto psi = spec.eigenfunction_samples(idx[static_cast<std::size_t>(m)], n);
    h[static_cast<std::size_t>(m)].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(i)];
  }
  const double gap = std::abs(spec.eigenvalues[static_cast<std::size_t>(idx[1])] - spec.eigenvalues[static_cast<std::size_t>(idx[0])]);
  const bool degenerate = gap < kDegeneracyGap;
  auto quality = [&](const std::vector<cplx>& f) {
    const double a = std::abs(project(f, ep)), b = std::abs(project(f, em));
    return std::max(a, b) > 0.0 ? std::min(a, b) / std::max(a, b) : 0.0;
  };
  const bool standing = quality(h[0]) >= 0.5 && quality(h[1]) >= 0.5;
  const bool span_fit = degenerate && !standing;

  auto remainder = [&](const std::vector<cplx>& f, double th) {
    const cplx cp = project(f, ep) * std::polar(1.0, omega * th);
    const cplx u = std::abs(cp) > 0.0 ? std::conj(cp) / std::abs(cp) : cplx(1.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      sup = std::max(sup, std::abs(sqrt_pi * f[i] * u - std::cos(omega * (theta[i] - th))));
    return sup;
  };

  std::vector<StandingWaveFit> out;
  const double period = kPi / omega;
  for (int m = 0; m < 2; ++m) {
    StandingWaveFit fit;
    fit.j = m == 0 ? cs.label : cs.partner_label;
    fit.index = idx[static_cast<std::size_t>(m)];
    fit.degenerate = degenerate;
    const double mu = spec.eigenvalues[static_cast<std::size_t>(fit.index)];
    fit.eigen_residual = mu - target;
    fit.scaled_eigen_residual = std::abs(fit.j) * std::abs(fit.eigen_residual);
    std::vector<cplx> f;
    if (span_fit) {
      fit.theta = m == 0 ? 0.0 : 0.5 * period;
      std::vector<cplx> t(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = std::cos(omega * (theta[static_cast<std::size_t>(i)] - fit.theta)) / sqrt_pi;
      f.assign(static_cast<std::size_t>(n), cplx(0.0));
      for (const auto& hm : h) {
        const cplx c = grid::inner(t, hm);
        for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] += c * hm[static_cast<std::size_t>(i)];
      }
      const double nf = grid::l2_norm(f);
      for (auto& v : f) v /= nf;
    } else {
      f = h[static_cast<std::size_t>(m)];
      const cplx cp = project(f, ep), cm = project(f, em);
      double th = std::arg(cm / cp) / (2.0 * omega);
      th = std::fmod(th, period);
      if (th < 0.0) th += period;
      fit.theta = th;
      fit.ambiguous = quality(f) < 0.5;
    }
    fit.R_sup = remainder(f, fit.theta) * cs.scale;
    fit.scaled_R_sup = std::abs(fit.j) * fit.R_sup;
    out.push_back(fit);
  }
  return out;
}

}  // namespace

std::vector<StandingWaveFit> reduce_nonsymmetric(const AngularPotential& p, const SpectralDecomposition& spec, int j) {
  require_electric(p);
  if (j < 1) throw Error(ErrorKind::InvalidInput, "j must be at least 1");
  return fit_cluster(p, spec, {static_cast<double>(j), j, -j, 1.0 / std::sqrt(kPi)});
}

std::vector<StandingWaveFit> integer_circulation_spectrum(const AngularPotential& p, const SpectralDecomposition& spec,
                                                          int j_min, int j_max) {
  if (classify_resonance(p) != ResonanceClass::IntegerCirculation)
    throw Error(ErrorKind::ResonantParameter, "integer circulation expected");
  std::vector<StandingWaveFit> rows;
  for (int j = j_min; j <= j_max; ++j) {
    auto f = fit_cluster(p, spec, {static_cast<double>(j), j, -j, 1.0});
    rows.insert(rows.end(), f.begin(), f.end());
  }
  return rows;
}

std::vector<StandingWaveFit> half_integer_spectrum(const AngularPotential& p, const SpectralDecomposition& spec,
                                                   int j_min, int j_max) {
  if (classify_resonance(p) != ResonanceClass::HalfIntegerCirculation)
    throw Error(ErrorKind::ResonantParameter, "half-integer circulation expected");
  std::vector<StandingWaveFit> rows;
  for (int j = j_min; j <= j_max; ++j) {
    auto f = fit_cluster(p, spec, {j + 0.5, j, -j - 1, 1.0});
    rows.insert(rows.end(), f.begin(), f.end());
  }
  return rows;
}

AngularPotential doubled_potential(const AngularPotential& p, double theta_bar) {
  require_electric(p);
  const int M = p.a().max_mode();
  FourierSeries d(2 * M);
  for (int m = -M; m <= M; ++m) {
    const cplx v = p.a()[m] * std::polar(1.0, m * theta_bar);
    if (std::abs(v.imag()) > 1e-10) throw Error(ErrorKind::SymmetryViolation, "a is not symmetric about theta_bar");
    d.at(2 * m) = 4.0 * v.real();
  }
  return AngularPotential::from_coefficients(d, FourierSeries());
}

}  // namespace magprop
