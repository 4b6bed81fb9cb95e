#include "magprop/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "magprop/bessel.hpp"
#include "magprop/error.hpp"

namespace magprop {

namespace {

constexpr double kSupSafety = 1.001;

cplx i_power_minus(double nu) { return std::polar(1.0, -0.5 * kPi * nu); }

// Dominant Fourier mode of e^{i(G - A_tilde theta)} psi, shifted by the winding.
long circulation_label(const AngularPotential& p, const std::vector<cplx>& psi_samples) {
  const int n = static_cast<int>(psi_samples.size());
  const auto phase = p.magnetic_phase(n);
  const auto theta = grid::nodes(n);
  std::vector<cplx> h(psi_samples.size());
  for (int i = 0; i < n; ++i) {
    const auto q = static_cast<std::size_t>(i);
    h[q] = psi_samples[q] * std::polar(1.0, phase[q] - p.A_tilde() * theta[q]);
  }
  const auto c = grid::forward(h);
  int best = 0;
  for (int k = 1; k < n; ++k)
    if (std::abs(c[static_cast<std::size_t>(k)]) > std::abs(c[static_cast<std::size_t>(best)])) best = k;
  return grid::mode_of(best, n) + p.winding();
}

}  // namespace

KernelSpec make_kernel_spec(const AngularPotential& p, const SpectralDecomposition& spec, double truncation_tol) {
  if (!(truncation_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "truncation tolerance must be positive");
  if (spec.dimension() == 0 || !(spec.eigenvalues.front() > 0.0))
    throw Error(ErrorKind::HypothesisViolation, "kernel requires mu_1 > 0");
  const int count = spec.resolved_count > 0 ? spec.resolved_count : spec.dimension();
  KernelSpec ks;
  ks.potential = p;
  ks.source = EigenSource::Galerkin;
  ks.truncation_tol = truncation_tol;
  const int n = std::max(512, grid::next_pow2(4 * spec.truncation + 4));
  std::map<long, int> seen;
  for (int k = 0; k < count; ++k) {
    ks.nu.push_back(std::sqrt(spec.eigenvalues[static_cast<std::size_t>(k)]));
    ks.psi.push_back(spec.eigenfunction(k));
    const auto s = spec.eigenfunction_samples(k, n);
    ks.psi_sup.push_back(grid::sup_norm(s) * kSupSafety);
    long j = circulation_label(p, s);
    // Mixed members of a degenerate cluster can share a dominant mode; the
    // partner label has the same |j + A_bar|.
    const long partner = -j - std::lround(2.0 * p.A_bar());
    if (seen.count(j) && !seen.count(partner)) j = partner;
    seen[j] = k;
    ks.label.push_back(j);
  }
  ks.sup_bound = *std::max_element(ks.psi_sup.begin(), ks.psi_sup.end());
  return ks;
}

KernelSpec ab_kernel_spec(double alpha, int k_max, double truncation_tol) {
  if (!(truncation_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "truncation tolerance must be positive");
  if (std::abs(alpha - std::round(alpha)) < kResonanceTol)
    throw Error(ErrorKind::HypothesisViolation, "integer flux gives a zero eigenvalue");
  KernelSpec ks;
  ks.potential = AngularPotential::aharonov_bohm(alpha);
  ks.source = EigenSource::ClosedFormAB;
  ks.alpha = alpha;
  ks.truncation_tol = truncation_tol;
  std::vector<int> ks_idx;
  for (int k = -k_max; k <= k_max; ++k) ks_idx.push_back(k);
  std::stable_sort(ks_idx.begin(), ks_idx.end(),
                   [&](int x, int y) { return std::abs(x + alpha) < std::abs(y + alpha); });
  const double s = 1.0 / std::sqrt(kTwoPi);
  for (int k : ks_idx) {
    ks.nu.push_back(std::abs(k + alpha));
    ks.psi.push_back(FourierSeries::single_mode(k, s));
    ks.psi_sup.push_back(s * kSupSafety);
    ks.label.push_back(k + ks.potential.winding());
  }
  ks.sup_bound = s * kSupSafety;
  return ks;
}

Truncation kernel_truncation(const KernelSpec& ks, double rho) {
  if (rho < 0.0) throw Error(ErrorKind::InvalidInput, "rho must be non-negative");
  const int K = ks.size();
  Truncation t;
  if (rho == 0.0) return t;
  const double nu_last = ks.nu.back();
  const double q = 0.5 * rho / (nu_last + 1.0);
  if (q >= 1.0) throw Error(ErrorKind::InsufficientResolution, "eigendata does not reach the Bessel decay regime");
  const double beyond = 2.0 * ks.sup_bound * ks.sup_bound * term_tail_bound(nu_last, rho) / (1.0 - q);
  if (beyond > ks.truncation_tol)
    throw Error(ErrorKind::InsufficientResolution, "unresolved eigenpairs exceed the tail budget");
  double suffix = beyond;
  int N = K;
  for (int k = K - 1; k >= 0; --k) {
    const auto q2 = static_cast<std::size_t>(k);
    const double next = suffix + ks.psi_sup[q2] * ks.psi_sup[q2] * term_tail_bound(ks.nu[q2], rho);
    if (next > ks.truncation_tol) break;
    suffix = next;
    N = k;
  }
  t.terms = N;
  t.tail_bound = suffix;
  return t;
}

std::vector<cplx> kernel_coefficients(const KernelSpec& ks, double rho, Truncation* trunc) {
  const auto t = kernel_truncation(ks, rho);
  if (trunc) *trunc = t;
  std::vector<cplx> c(static_cast<std::size_t>(t.terms));
  for (int k = 0; k < t.terms; ++k) {
    const double nu = ks.nu[static_cast<std::size_t>(k)];
    c[static_cast<std::size_t>(k)] = i_power_minus(nu) * bessel_j(nu, rho);
  }
  return c;
}

KernelValue eval_kernel(const KernelSpec& ks, double rho, double theta, double theta_p) {
  Truncation t;
  const auto c = kernel_coefficients(ks, rho, &t);
  KernelValue out;
  out.terms_used = t.terms;
  out.tail_bound = t.tail_bound;
  out.value = 0.0;
  for (int k = 0; k < t.terms; ++k) {
    const auto& f = ks.psi[static_cast<std::size_t>(k)];
    out.value += c[static_cast<std::size_t>(k)] * f(theta) * std::conj(f(theta_p));
  }
  return out;
}

cplx ab_kernel(double alpha, double rho, double theta, double theta_p) {
  const int k_max = static_cast<int>(std::ceil(rho + 10.0 * std::cbrt(rho) + 40.0));
  return eval_kernel(ab_kernel_spec(alpha, k_max, 1e-12), rho, theta, theta_p).value;
}

namespace {

Eigen::MatrixXcd sample_matrix(const KernelSpec& ks, int n) {
  Eigen::MatrixXcd m(n, ks.size());
  for (int k = 0; k < ks.size(); ++k) {
    const auto s = ks.psi[static_cast<std::size_t>(k)].sample(n);
    for (int i = 0; i < n; ++i) m(i, k) = s[static_cast<std::size_t>(i)];
  }
  return m;
}

std::vector<double> rho_grid(const ScanGrid& g) {
  std::vector<double> r(static_cast<std::size_t>(g.n_rho + 1));
  for (int i = 0; i <= g.n_rho; ++i) r[static_cast<std::size_t>(i)] = g.rho_max * i / g.n_rho;
  return r;
}

void check_grid(const ScanGrid& g) {
  if (!(g.rho_max > 0.0) || g.n_rho < 1 || g.n_theta < 1 || g.n_theta_p < 1)
    throw Error(ErrorKind::InvalidInput, "scan grid must be non-empty with rho_max > 0");
}

}  // namespace

SupScanReport sup_scan(const KernelSpec& ks, const ScanGrid& g) {
  check_grid(g);
  const auto P = sample_matrix(ks, g.n_theta);
  const auto Q = sample_matrix(ks, g.n_theta_p);
  const auto th = grid::nodes(g.n_theta), thp = grid::nodes(g.n_theta_p);
  SupScanReport rep;
  for (double rho : rho_grid(g)) {
    Truncation t;
    const auto c = kernel_coefficients(ks, rho, &t);
    ScanPoint best{rho, 0.0, 0.0, cplx(0.0), t.terms, t.tail_bound};
    if (t.terms > 0) {
      Eigen::Map<const Eigen::VectorXcd> cv(c.data(), t.terms);
      const Eigen::MatrixXcd K = P.leftCols(t.terms) * cv.asDiagonal() * Q.leftCols(t.terms).adjoint();
      Eigen::Index i = 0, j = 0;
      K.cwiseAbs().maxCoeff(&i, &j);
      best.theta = th[static_cast<std::size_t>(i)];
      best.theta_p = thp[static_cast<std::size_t>(j)];
      best.value = K(i, j);
    }
    rep.max_tail_bound = std::max(rep.max_tail_bound, t.tail_bound);
    if (std::abs(best.value) > rep.max_abs) {
      rep.max_abs = std::abs(best.value);
      rep.argmax = best;
    }
    rep.per_rho.push_back(best);
  }
  for (int d = 0; d < 3; ++d) {
    WindowMax w{0.0, g.rho_max * std::pow(10.0, -d), 0.0};
    for (const auto& r : rep.per_rho)
      if (r.rho <= w.rho_hi) w.max_abs = std::max(w.max_abs, std::abs(r.value));
    rep.windows.push_back(w);
  }
  const double m0 = rep.windows[0].max_abs, m1 = rep.windows[1].max_abs;
  rep.window_variation = std::max(m0, m1) > 0.0 ? std::abs(m0 - m1) / std::max(m0, m1) : 0.0;
  return rep;
}

std::vector<DifferenceRow> difference_scan(const KernelSpec& ks, const ScanGrid& g, const std::vector<int>& ells) {
  check_grid(g);
  const AngularPotential& p = ks.potential;
  const double abar = p.A_bar();
  const double norm = std::sqrt(kTwoPi);
  auto gauged = [&](int n) {
    Eigen::MatrixXcd U = sample_matrix(ks, n);
    const auto G = p.magnetic_phase(n);
    for (int i = 0; i < n; ++i) U.row(i) *= norm * std::polar(1.0, G[static_cast<std::size_t>(i)]);
    return U;
  };
  auto plane = [&](int n) {
    const auto th = grid::nodes(n);
    Eigen::MatrixXcd E(n, ks.size());
    for (int k = 0; k < ks.size(); ++k)
      for (int i = 0; i < n; ++i)
        E(i, k) = std::polar(1.0, (static_cast<double>(ks.label[static_cast<std::size_t>(k)]) + abar) * th[static_cast<std::size_t>(i)]);
    return E;
  };
  const auto U = gauged(g.n_theta), V = gauged(g.n_theta_p);
  const auto E = plane(g.n_theta), F = plane(g.n_theta_p);

  std::vector<DifferenceRow> rows;
  for (int ell : ells) rows.push_back({ell, 0.0, 0.0, 0});
  for (double rho : rho_grid(g)) {
    Truncation t;
    const auto c = kernel_coefficients(ks, rho, &t);
    if (t.terms == 0) continue;
    for (auto& row : rows) {
      Eigen::VectorXcd cg = Eigen::VectorXcd::Zero(t.terms), ca = Eigen::VectorXcd::Zero(t.terms);
      int pairs = 0;
      for (int k = 0; k < t.terms; ++k) {
        const long j = ks.label[static_cast<std::size_t>(k)];
        if (std::labs(j) < row.ell) continue;
        ++pairs;
        const double nu_ab = std::abs(static_cast<double>(j) + abar);
        cg(k) = c[static_cast<std::size_t>(k)];
        ca(k) = i_power_minus(nu_ab) * bessel_j(nu_ab, rho);
      }
      if (pairs == 0) continue;
      const Eigen::MatrixXcd D = (U.leftCols(t.terms) * cg.asDiagonal() * V.leftCols(t.terms).adjoint() -
                                  E.leftCols(t.terms) * ca.asDiagonal() * F.leftCols(t.terms).adjoint()) /
                                 kTwoPi;
      const double m = D.cwiseAbs().maxCoeff();
      row.pairs = std::max(row.pairs, pairs);
      if (m > row.max_abs) {
        row.max_abs = m;
        row.rho_at_max = rho;
      }
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& rows) {
  os << "rho,theta,theta_p,re,im,abs,terms_used,tail_bound\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", r.rho, r.theta, r.theta_p,
                  r.value.real(), r.value.imag(), std::abs(r.value), r.terms_used, r.tail_bound);
    os << buf;
  }
}

}  // namespace magprop
