#include "magprop/wkb.hpp"

#include <algorithm>
#include <cmath>

#include "magprop/error.hpp"

namespace magprop {

namespace {

double half_lattice_distance(double x) { return 0.5 * std::abs(2.0 * x - std::round(2.0 * x)); }

}  // namespace

int wkb_grid_size(const AngularPotential& p) { return std::max(256, grid::next_pow2(4 * p.bandwidth())); }

double default_delta(const AngularPotential& p) { return 0.1 * resonance_distance(p); }

std::vector<cplx> apply_contraction(const AngularPotential& p, double lambda, const std::vector<cplx>& W) {
  const int n = static_cast<int>(W.size());
  const double a_t = p.a_tilde();
  const double kappa = std::sqrt(lambda - a_t);
  const auto a = p.a().sample(n);
  std::vector<cplx> f(W.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a_t - a[i] - W[i] * W[i];
  auto c = grid::forward(f);
  for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] /= grid::mode_of(k, n) + 2.0 * kappa;
  return grid::inverse(c);
}

WkbSolution fixed_point(const AngularPotential& p, double lambda, double tol, double delta) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
  const double a_t = p.a_tilde();
  if (!(lambda > a_t)) throw Error(ErrorKind::InvalidInput, "lambda must exceed the mean of a");
  const double kappa = std::sqrt(lambda - a_t);
  if (half_lattice_distance(kappa) < delta)
    throw Error(ErrorKind::ResonantParameter, "sqrt(lambda - a_tilde) lies in the resonance strip");

  const int n = wkb_grid_size(p);
  WkbSolution s;
  s.lambda = lambda;
  s.kappa = kappa;
  s.W.assign(static_cast<std::size_t>(n), cplx(0.0));
  double prev_change = std::numeric_limits<double>::infinity();
  int growing = 0;
  bool done = false;
  for (int it = 1; it <= 200; ++it) {
    auto next = apply_contraction(p, lambda, s.W);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - s.W[i]));
    s.W = std::move(next);
    s.iterations = it;
    s.fp_residual = change;
    if (!std::isfinite(change)) break;
    if (change <= tol) {
      done = true;
      break;
    }
    growing = change > prev_change ? growing + 1 : 0;
    if (growing >= 5) break;
    prev_change = change;
  }
  if (!done) throw Error(ErrorKind::NoConvergence, "contraction map did not converge at this lambda");

  const auto a = p.a().sample(n);
  const auto dW = grid::derivative(s.W);
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const cplx r = cplx(0.0, -1.0) * dW[k] + 2.0 * kappa * s.W[k] + s.W[k] * s.W[k] - (a_t - a[k]);
    res = std::max(res, std::abs(r));
  }
  s.ode_residual = res;
  if (res > 10.0 * tol * kappa + 1e-13)
    throw Error(ErrorKind::NoConvergence, "fixed point fails the Riccati residual check");

  const auto G = grid::antiderivative_from_zero(s.W, &s.mean_W);
  const auto theta = grid::nodes(n);
  s.S.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    s.S[k] = (kappa + s.mean_W) * theta[k] + G[k];
  }
  return s;
}

double effective_lambda(const AngularPotential& p, double tol) {
  const double delta = 0.1;
  int streak = 0;
  double first = 0.0;
  for (int n = 0; n < 4000; ++n) {
    const double kappa = 0.5 * n + 0.25;
    const double lambda = p.a_tilde() + kappa * kappa;
    bool ok = true;
    try {
      fixed_point(p, lambda, tol, delta);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence) throw;
      ok = false;
    }
    if (ok) {
      if (streak == 0) first = lambda;
      if (++streak == 4) return first;
    } else {
      streak = 0;
    }
  }
  throw Error(ErrorKind::NoConvergence, "no effective lambda found");
}

const char* to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

void fix_phase_samples(std::vector<cplx>& f) {
  const int n = static_cast<int>(f.size());
  const auto c = grid::forward(f);
  double cmax = 0.0;
  for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) return;
  // Lowest mode first, matching the convention of the Galerkin eigenvectors.
  for (int m = -((n - 1) / 2); m <= n / 2; ++m) {
    const cplx v = c[static_cast<std::size_t>((m + n) % n)];
    if (std::abs(v) >= (1.0 - 1e-9) * cmax) {
      const cplx u = std::conj(v) / std::abs(v);
      for (auto& x : f) x *= u;
      return;
    }
  }
}

AsymptoticEigenpair solve_eigenvalue(const AngularPotential& p, int k, Branch branch, double tol) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "index must be at least 1");
  if (classify_resonance(p) != ResonanceClass::NonResonant)
    throw Error(ErrorKind::ResonantParameter, "WKB eigenvalue equations need non-resonant circulation");
  const double delta = default_delta(p);
  const double s = branch == Branch::Plus ? 1.0 : -1.0;
  const double target = s * p.A_bar() + k;

  AsymptoticEigenpair out;
  out.branch = branch;
  out.j = branch == Branch::Plus ? k : -k;
  out.predicted_lambda = p.a_tilde() + (out.j + p.A_bar()) * (out.j + p.A_bar());

  double kappa = target;
  bool converged = false;
  for (int it = 1; it <= 60; ++it) {
    if (!(kappa > 0.0)) break;
    out.wkb = fixed_point(p, p.a_tilde() + kappa * kappa, tol, delta);
    const double next = target - out.wkb.mean_W.real();
    out.scalar_iterations = it;
    const double step = std::abs(next - kappa);
    kappa = next;
    if (step <= 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "scalar eigenvalue equation did not converge");
  out.wkb = fixed_point(p, p.a_tilde() + kappa * kappa, tol, delta);
  out.lambda_j = out.wkb.lambda;

  const int n = static_cast<int>(out.wkb.S.size());
  const auto phase = p.magnetic_phase(n);
  out.phi.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto q = static_cast<std::size_t>(i);
    const cplx S = out.wkb.S[q];
    const cplx e = branch == Branch::Plus ? std::exp(cplx(0.0, 1.0) * S) : std::exp(cplx(0.0, -1.0) * std::conj(S));
    out.phi[q] = std::polar(1.0, -phase[q]) * e;
  }
  const double norm = grid::l2_norm(out.phi);
  for (auto& v : out.phi) v /= norm;
  fix_phase_samples(out.phi);
  return out;
}

double subspace_angle(const std::vector<cplx>& f, const std::vector<cplx>& g) {
  const double nf = grid::l2_norm(f), ng = grid::l2_norm(g);
  const cplx c = grid::inner(f, g) / (nf * ng);
  double r2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) r2 += std::norm(f[i] / nf - c * g[i] / ng);
  const double r = std::sqrt(r2 * kTwoPi / static_cast<double>(f.size()));
  return std::asin(std::min(1.0, r));
}

std::vector<ResidualRow> asymptotic_residuals(const AngularPotential& p, const SpectralDecomposition& spec,
                                              int j_min, int j_max) {
  if (j_min < 1 || j_max < j_min) throw Error(ErrorKind::InvalidInput, "bad j range");
  const int n = std::max(512, grid::next_pow2(2 * spec.truncation + 2));
  const auto phase = p.magnetic_phase(n);
  const auto theta = grid::nodes(n);
  const double sqrt2pi = std::sqrt(kTwoPi);
  const double wind = static_cast<double>(p.winding());

  std::vector<ResidualRow> rows;
  for (int sign : {-1, 1}) {
    for (int m = j_min; m <= j_max; ++m) {
      const int j = sign * m;
      ResidualRow row;
      row.j = j;
      const double target = p.a_tilde() + (j + p.A_bar()) * (j + p.A_bar());
      std::vector<double> d;
      for (double mu : spec.eigenvalues) d.push_back(std::abs(mu - target));
      row.index = static_cast<int>(std::min_element(d.begin(), d.end()) - d.begin());
      if (spec.resolved_count > 0 && row.index >= spec.resolved_count)
        throw Error(ErrorKind::InsufficientResolution, "j range exceeds the resolved spectrum");
      const double d1 = d[static_cast<std::size_t>(row.index)];
      d[static_cast<std::size_t>(row.index)] = std::numeric_limits<double>::infinity();
      const double d2 = *std::min_element(d.begin(), d.end());
      row.ambiguous = d2 <= 4.0 * d1 + 1e-9 * std::max(1.0, target);

      const double mu = spec.eigenvalues[static_cast<std::size_t>(row.index)];
      row.eigen_residual = mu - target;
      row.scaled_eigen_residual = static_cast<double>(j) * j * std::abs(row.eigen_residual);

      const auto psi = spec.eigenfunction_samples(row.index, n);
      std::vector<cplx> h(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const auto q = static_cast<std::size_t>(i);
        h[q] = sqrt2pi * std::polar(1.0, wind * theta[q] + phase[q]) * psi[q];
        e[q] = std::polar(1.0, (p.A_tilde() + j) * theta[q]);
      }
      const cplx ov = grid::inner(e, h);
      const cplx c = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
      double sup = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto q = static_cast<std::size_t>(i);
        sup = std::max(sup, std::abs(c * h[q] - e[q]));
      }
      row.R_sup = sup;
      row.scaled_R_sup = std::pow(std::abs(static_cast<double>(j)), 3) * sup;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace magprop
