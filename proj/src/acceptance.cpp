#include "magprop/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "magprop/analysis.hpp"
#include "magprop/bessel.hpp"
#include "magprop/electric.hpp"
#include "magprop/error.hpp"
#include "magprop/galerkin.hpp"
#include "magprop/kernel.hpp"
#include "magprop/propagator.hpp"
#include "magprop/wkb.hpp"

namespace magprop {

namespace {

FourierSeries cosine(int m, double amp) {
  FourierSeries f(m);
  f.at(m) += 0.5 * amp;
  if (m != 0) f.at(-m) += 0.5 * amp;
  return f;
}

FourierSeries sine(int m, double amp) {
  FourierSeries f(m);
  f.at(m) = cplx(0.0, -0.5 * amp);
  f.at(-m) = cplx(0.0, 0.5 * amp);
  return f;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void append(std::string& s, const std::string& part) {
  if (!s.empty()) s += "; ";
  s += part;
}

struct NamedPotential {
  const char* name;
  AngularPotential p;
};

std::vector<NamedPotential> suite_potentials() {
  return {{"AB(0.3)", suite::ab()}, {"P1", suite::p1()}, {"P2", suite::p2()}};
}

RadialGrid uniform_cells(double R, double h) {
  RadialGrid g;
  const int n = static_cast<int>(std::lround(R / h));
  for (int i = 1; i <= n; ++i) {
    g.r.push_back((i - 0.5) * h);
    g.w.push_back(h * (i - 0.5) * h);
  }
  g.r_max = R;
  g.max_spacing = h;
  return g;
}

CriterionResult row(int id, std::string name, bool informational = false) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.passed = true;
  r.informational = informational;
  return r;
}

CriterionResult criterion1() {
  auto r = row(1, "AB exactness");
  for (double alpha : {0.3, -0.25, 0.5}) {
    const auto s = solve_spectrum(AngularPotential::aharonov_bohm(alpha), 64);
    double eig_err = 0.0, vec_err = 0.0;
    std::vector<double> expected;
    for (int k = -64; k <= 64; ++k) expected.push_back((k + alpha) * (k + alpha));
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < s.dimension(); ++i) {
      eig_err = std::max(eig_err, std::abs(s.eigenvalues[i] - expected[i]));
      int dominant;
      s.eigenvectors.col(i).cwiseAbs().maxCoeff(&dominant);
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.dimension());
      e(dominant) = 1.0;
      vec_err = std::max(vec_err, (s.eigenvectors.col(i) - e).cwiseAbs().maxCoeff());
      const int mode = dominant - 64;
      eig_err = std::max(eig_err, std::abs(s.eigenvalues[i] - (mode + alpha) * (mode + alpha)));
    }
    const bool ok = s.dimension() == 129 && eig_err <= 1e-10 && vec_err <= 1e-10;
    r.passed = r.passed && ok;
    append(r.detail, fmt("alpha=%g: %d modes, eig err %.1e, vector err %.1e", alpha, s.dimension(), eig_err, vec_err));
  }
  return r;
}

// Residual tables for criteria 2 and 3.
struct ResidualFit {
  double eig_slope = 0.0, R_slope = 0.0;
  double max_scaled_eig = 0.0, max_scaled_R = 0.0;
  std::size_t rows = 0;
  int ambiguous = 0;
};

ResidualFit residual_fit(const AngularPotential& p) {
  const auto rows = asymptotic_residuals(p, solve_spectrum(p, 128), 8, 48);
  std::vector<double> j, eig, R;
  ResidualFit f;
  for (const auto& row : rows) {
    if (row.ambiguous) ++f.ambiguous;
    j.push_back(std::abs(row.j));
    eig.push_back(std::abs(row.eigen_residual));
    R.push_back(row.R_sup);
    f.max_scaled_eig = std::max(f.max_scaled_eig, row.scaled_eigen_residual);
    f.max_scaled_R = std::max(f.max_scaled_R, row.scaled_R_sup);
  }
  f.rows = rows.size();
  f.eig_slope = loglog_slope(j, eig);
  f.R_slope = loglog_slope(j, R);
  return f;
}

CriterionResult criterion2() {
  auto r = row(2, "eigenvalue asymptotics");
  for (auto& [name, p] : {NamedPotential{"P1", suite::p1()}, NamedPotential{"P2", suite::p2()}}) {
    const auto f = residual_fit(p);
    const bool ok = f.rows == 82 && f.ambiguous == 0 && f.eig_slope <= -1.8;
    r.passed = r.passed && ok;
    append(r.detail, fmt("%s: slope %.3f (<= -1.8), max j^2|res| %.3f, %zu rows", name, f.eig_slope, f.max_scaled_eig, f.rows));
  }
  return r;
}

CriterionResult criterion3() {
  auto r = row(3, "eigenfunction asymptotics");
  for (auto& [name, p] : {NamedPotential{"P1", suite::p1()}, NamedPotential{"P2", suite::p2()}}) {
    const auto f = residual_fit(p);
    const bool ok = f.rows == 82 && f.ambiguous == 0 && f.R_slope <= -2.5;
    r.passed = r.passed && ok;
    append(r.detail, fmt("%s: slope of ||R_j|| %.3f (<= -2.5), max |j|^3||R_j|| %.1f", name, f.R_slope, f.max_scaled_R));
  }
  return r;
}

CriterionResult criterion4() {
  auto r = row(4, "WKB vs Galerkin");
  for (const auto& [name, p] : suite_potentials()) {
    const auto spec = solve_spectrum(p, 128);
    double eig_err = 0.0, angle = 0.0, fp = 0.0;
    int failures = 0;
    for (int k = 8; k <= 24; ++k) {
      for (auto branch : {Branch::Plus, Branch::Minus}) {
        const auto e = solve_eigenvalue(p, k, branch);
        const int idx = nearest_eigenvalue(spec, e.lambda_j);
        const int n = static_cast<int>(e.phi.size());
        const double de = std::abs(e.lambda_j - spec.eigenvalues[static_cast<std::size_t>(idx)]);
        const double an = subspace_angle(e.phi, spec.eigenfunction_samples(idx, n));
        const double rel_fp = e.wkb.fp_residual / std::sqrt(e.lambda_j);
        if (de > 1e-6 || an > 1e-4 || rel_fp > 1e-8) ++failures;
        eig_err = std::max(eig_err, de);
        angle = std::max(angle, an);
        fp = std::max(fp, rel_fp);
      }
    }
    r.passed = r.passed && failures == 0;
    append(r.detail, fmt("%s: eig %.1e, angle %.1e, fp/sqrt(lambda) %.1e", name, eig_err, angle, fp));
  }
  return r;
}

CriterionResult criterion5() {
  auto r = row(5, "cluster localization");
  for (const auto& [name, p] : suite_potentials()) {
    const auto rep = cluster_check(solve_spectrum(p, 128), p, 10, 40);
    r.passed = r.passed && rep.passed();
    append(r.detail, fmt("%s: c=%.3f %s", name, rep.c, rep.passed() ? "ok" : "FAILED"));
  }
  return r;
}

CriterionResult criterion6() {
  auto r = row(6, "electric and half-integer asymptotics");
  const auto p = suite::mathieu();
  const auto spec = solve_spectrum(p, 128);

  const auto s1 = electric_eigenpair(p, 1, Parity::Sin);
  const auto c1 = electric_eigenpair(p, 1, Parity::Cos);
  const double split = c1.lambda_corrected - s1.lambda_corrected;
  const double ac2 = cos_fourier_coeff(p, 2);
  // O(1) correction window, taken as 1
  const double window = 1.0;
  const bool split_ok = std::abs(split - ac2) <= window;
  r.passed = split_ok;
  append(r.detail, fmt("k=1 split %.4f vs a_c2 %.1f (window %.2f)", split, ac2, window));

  for (auto par : {Parity::Sin, Parity::Cos}) {
    std::vector<double> ks, dev;
    double gal_err = 0.0;
    for (int k = 4; k <= 32; ++k) {
      const auto e = electric_eigenpair(p, k, par);
      const double gal = spec.eigenvalues[static_cast<std::size_t>(nearest_eigenvalue(spec, e.lambda_corrected))];
      gal_err = std::max(gal_err, std::abs(e.lambda_corrected - gal) / (k * k));
      ks.push_back(k);
      dev.push_back(k * std::abs(e.lambda_corrected - e.lambda_prediction));
    }
    const auto tr = check_trend(ks, dev);
    const bool ok = tr.bounded && gal_err <= 1e-9;
    r.passed = r.passed && ok;
    append(r.detail, fmt("%s: max k|dev| %.3f slope %.2f, Galerkin rel %.1e", to_string(par), tr.max_value, tr.slope, gal_err));
  }

  const std::vector<NamedPotential> half{
      {"AB(0.5)", AngularPotential::aharonov_bohm(0.5)},
      {"cos,A=0.5", AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.5))},
      {"cos,A=0.5+0.2cos", AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.5) + cosine(1, 0.2))},
  };
  for (const auto& [name, q] : half) {
    const auto rows = half_integer_spectrum(q, solve_spectrum(q, 128), 8, 40);
    std::vector<double> js, sr, se;
    int ambiguous = 0;
    for (const auto& f : rows) {
      js.push_back(std::abs(f.j));
      sr.push_back(f.scaled_R_sup);
      se.push_back(f.scaled_eigen_residual);
      if (f.ambiguous) ++ambiguous;
    }
    const auto tR = check_trend(js, sr), tE = check_trend(js, se);
    const bool ok = !rows.empty() && ambiguous == 0 && tR.bounded && tE.bounded;
    r.passed = r.passed && ok;
    append(r.detail, fmt("%s: max j|R| %.3g, max j|res| %.3g", name, tR.max_value, tE.max_value));
  }
  return r;
}

// Decrease of the difference scan against the |j|^{-10/3} budget, whose tail
// sum over |j| >= ell falls like ell^{-7/3}.
constexpr double kBudgetSlope = -7.0 / 3.0;
constexpr double kBudgetSlack = 1.0 / 3.0;

std::string describe_differences(const std::vector<DifferenceRow>& rows, double* slope) {
  std::vector<double> l, m;
  std::string s;
  for (const auto& d : rows) {
    s += fmt(" %d:%.2e", d.ell, d.max_abs);
    if (d.ell >= 4) {
      l.push_back(d.ell);
      m.push_back(d.max_abs);
    }
  }
  *slope = l.size() >= 2 ? loglog_slope(l, m) : 0.0;
  return s;
}

std::vector<CriterionResult> criterion7() {
  auto r = row(7, "kernel boundedness");
  const ScanGrid grid;  // rho in [0, 50], 200 x 64 x 64
  const std::vector<int> ells{1, 2, 4, 8, 16, 24, 32};

  const auto ab = ab_kernel_spec(0.3, 200, 1e-10);
  const auto sab = sup_scan(ab, grid);
  const auto dab = difference_scan(ab, grid, ells);
  double ab_diff = 0.0;
  for (const auto& d : dab) ab_diff = std::max(ab_diff, d.max_abs);
  const bool ab_ok = std::isfinite(sab.max_abs) && sab.window_variation <= 0.10 && ab_diff <= 1e-9;
  r.passed = ab_ok;
  append(r.detail, fmt("AB(0.3): max|K| %.4f at rho %.2f, variation %.2f%%, difference %.1e", sab.max_abs, sab.argmax.rho,
                       100.0 * sab.window_variation, ab_diff));

  const auto p1 = suite::p1();
  try {
    const auto ks = make_kernel_spec(p1, solve_spectrum(p1, 128), 1e-10);
    const auto s = sup_scan(ks, grid);
    double slope = 0.0;
    const auto diffs = describe_differences(difference_scan(ks, grid, ells), &slope);
    const bool ok = std::isfinite(s.max_abs) && s.window_variation <= 0.10 && slope <= kBudgetSlope + kBudgetSlack;
    r.passed = r.passed && ok;
    append(r.detail, fmt("P1: max|K| %.4f, variation %.2f%%, slope %.2f, by ell%s", s.max_abs, 100.0 * s.window_variation, slope,
                         diffs.c_str()));
  } catch (const Error& e) {
    r.passed = false;
    append(r.detail, std::string("P1: ") + e.what());
  }

  auto info = row(7, "kernel boundedness, fallback a = 1 + cos", true);
  const auto pp = suite::p1_plus();
  const auto ks = make_kernel_spec(pp, solve_spectrum(pp, 128), 1e-10);
  const auto s = sup_scan(ks, grid);
  double slope = 0.0;
  const auto diffs = describe_differences(difference_scan(ks, grid, ells), &slope);
  info.passed = std::isfinite(s.max_abs) && s.window_variation <= 0.10 && slope <= kBudgetSlope + kBudgetSlack;
  info.detail = fmt("max|K| %.4f at rho %.2f, variation %.2f%%; difference slope %.2f (budget %.2f), by ell%s", s.max_abs,
                    s.argmax.rho, 100.0 * s.window_variation, slope, kBudgetSlope, diffs.c_str());
  return {r, info};
}

CriterionResult criterion8() {
  auto r = row(8, "decay estimate");
  const double r0 = 2.0, w = 0.3;
  const auto ts = log_spaced(1e-2, 1e3, 12);
  const auto ring = WavePacket::sample(gauss_panels(ring_support(r0, w), 12 * 0.0008), 8, gaussian_ring(r0, w));

  const NamedPotential cases[] = {{"AB(0.3)", suite::ab()}, {"a=1+cos,A=0.3", suite::p1_plus()}};
  for (const auto& [name, p] : cases) {
    const auto ks = p.magnetic_is_constant() && p.a().max_mode() == 0 && p.a_tilde() == 0.0
                        ? ab_kernel_spec(p.A_tilde(), 64, 1e-12)
                        : make_kernel_spec(p, solve_spectrum(p, 64), 1e-12);
    const auto prof = decay_profile(ks, ring, ts);
    const double ratio = prof.max_functional / prof.median_functional;
    const bool ok = std::isfinite(prof.max_functional) && ratio <= 3.0 && prof.max_l2_defect <= 1e-5;
    r.passed = r.passed && ok;
    append(r.detail, fmt("%s: C=%.5f, max/median %.3f, L2 defect %.1e", name, prof.max_functional, ratio, prof.max_l2_defect));
  }
  return r;
}

std::vector<CriterionResult> criterion9() {
  auto r = row(9, "oracle equivalence");
  const double t = 0.5;

  {
    const auto ks = ab_kernel_spec(0.3, 20, 1e-12);
    const auto psi = FourierSeries::single_mode(1, 1.0 / std::sqrt(kTwoPi));
    const auto f = single_mode_packet(psi, 1.3, 0.5);
    const auto cn = crank_nicolson_oracle(ks, f, 16, t, CnParams{});
    EvolveOptions o;
    o.output = &cn.field.grid;
    const auto rep = evolve(ks, WavePacket::sample(gauss_panels(4.5, 0.03), 16, f), t, o);
    const double d = relative_l2(rep.field, cn.field);
    r.passed = d <= 1e-3;
    append(r.detail, fmt("AB(0.3) single mode vs CN %.2e", d));
  }
  {
    const auto p = suite::p1_plus();
    const auto ks = make_kernel_spec(p, solve_spectrum(p, 48), 1e-12);
    const auto f = gaussian_ring(2.0, 0.5);
    CnParams prm;
    prm.R = 16.0;
    const auto cn = crank_nicolson_oracle(ks, f, 16, t, prm);
    EvolveOptions o;
    o.output = &cn.field.grid;
    const auto rep = evolve(ks, WavePacket::sample(gauss_panels(ring_support(2.0, 0.5), 0.1), 16, f), t, o);
    const double d = relative_l2(rep.field, cn.field);
    r.passed = r.passed && d <= 1e-3;
    append(r.detail, fmt("a=1+cos,A=0.3 ring vs CN %.2e", d));
  }

  const auto one = AngularPotential::from_coefficients(FourierSeries::constant(1.0), FourierSeries());
  const auto ks1 = make_kernel_spec(one, solve_spectrum(one, 16), 1e-12);
  const auto out = uniform_cells(10.0, 0.01);
  EvolveOptions o;
  o.output = &out;
  const double sigma = 0.5;
  {
    const auto g = WavePacket::sample(gauss_panels(4.0, 0.1), 16,
                                      [&](double x, double) { return cplx(std::exp(-x * x / (2 * sigma * sigma))); });
    const auto rg = evolve(ks1, g, t, o);
    const auto expected = WavePacket::sample(out, 16, [&](double x, double) {
      const cplx s2 = sigma * sigma + cplx(0.0, 2.0 * t);
      return std::exp(cplx(0.0, -t)) * (sigma * sigma / s2) * std::exp(-x * x / (2.0 * s2));
    });
    const double d = relative_l2(rg.field, expected);
    r.passed = r.passed && d <= 1e-4;
    append(r.detail, fmt("a=1 Gaussian vs e^{-it} x free %.2e", d));
  }

  auto info = row(9, "a = 1 against its exact nu = 1 solution", true);
  const auto psi0 = FourierSeries::constant(1.0 / std::sqrt(kTwoPi));
  const auto u0 = WavePacket::sample(gauss_panels(4.0, 0.1), 16, single_mode_packet(psi0, 1.0, sigma));
  const auto ru = evolve(ks1, u0, t, o);
  const auto exact = WavePacket::sample(out, 16, [&](double x, double th) {
    const cplx s2 = sigma * sigma + cplx(0.0, 2.0 * t);
    return x * std::pow(sigma * sigma / s2, 2.0) * std::exp(-x * x / (2.0 * s2)) * psi0(th);
  });
  const double d = relative_l2(ru.field, exact);
  info.passed = d <= 1e-4;
  info.detail = fmt("r e^{-r^2/2 sigma^2} under -Delta + 1/r^2: rel L2 %.2e", d);
  return {r, info};
}

CriterionResult criterion10() {
  auto r = row(10, "Bessel layer");
  double rec = 0.0;
  for (double nu = 1.0; nu <= 100.0; nu += 1.37)
    for (double x = 0.1; x <= 200.0; x *= 1.11)
      rec = std::max(rec, std::abs(bessel_j(nu - 1, x) + bessel_j(nu + 1, x) - 2.0 * nu / x * bessel_j(nu, x)));

  double overlap = 0.0;
  for (double nu = 0.0; nu <= 100.0; nu += 0.73) {
    const double x0 = std::max(12.0, 0.5 * nu);
    for (double x = x0; x <= x0 + 3.0; x += 0.25) {
      const double b = detail::bessel_miller(nu, x).value;
      const double amp = std::hypot(b, detail::bessel_miller(nu + 1, x).value);
      overlap = std::max(overlap, std::abs(detail::bessel_series(nu, x).value - b) / amp);
    }
  }
  for (double nu = 0.0; nu <= 20.0; nu += 0.61) {
    const double x0 = std::max(30.0, 0.5 * nu * nu);
    for (double x = x0; x <= x0 + 10.0; x += 0.5) {
      const auto h = detail::bessel_hankel(nu, x);
      const double b = detail::bessel_miller(nu, x).value;
      const double amp = std::hypot(b, detail::bessel_miller(nu + 1, x).value);
      overlap = std::max(overlap, std::isfinite(h.est_abs_err) ? std::abs(h.value - b) / amp : 1.0);
    }
  }

  std::vector<double> grid(2000);
  for (int i = 0; i < 2000; ++i) grid[i] = 600.0 * i / 1999.0;
  const double c250 = landau_bound_check(250, grid);
  const double c500 = landau_bound_check(500, grid);
  const double drift = std::abs(c500 - c250) / c250;

  r.passed = rec <= 1e-8 && overlap <= 1e-9 && drift <= 0.05;
  r.detail = fmt("recurrence %.1e, overlap %.1e, Landau C(250) %.4f C(500) %.4f drift %.2f%%", rec, overlap, c250, c500,
                 100.0 * drift);
  return r;
}

constexpr double kBudget[] = {0, 5, 30, 30, 60, 10, 60, 300, 300, 180, 30};

}  // namespace

namespace suite {
AngularPotential ab(double alpha) { return AngularPotential::aharonov_bohm(alpha); }
AngularPotential p1() { return AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.3)); }
AngularPotential p2() {
  return AngularPotential::from_coefficients(cosine(1, 1.0) + sine(2, 0.5), FourierSeries::constant(0.3) + cosine(1, 0.2));
}
AngularPotential p1_plus() {
  return AngularPotential::from_coefficients(FourierSeries::constant(1.0) + cosine(1, 1.0), FourierSeries::constant(0.3));
}
AngularPotential mathieu() { return AngularPotential::from_coefficients(cosine(2, 2.0), FourierSeries()); }
}  // namespace suite

std::vector<CriterionResult> run_criterion(int id) {
  if (id < 1 || id > 10) throw Error(ErrorKind::InvalidInput, "criterion id must be in 1..10");
  const auto start = std::chrono::steady_clock::now();
  std::vector<CriterionResult> rows;
  try {
    switch (id) {
      case 1: rows = {criterion1()}; break;
      case 2: rows = {criterion2()}; break;
      case 3: rows = {criterion3()}; break;
      case 4: rows = {criterion4()}; break;
      case 5: rows = {criterion5()}; break;
      case 6: rows = {criterion6()}; break;
      case 7: rows = criterion7(); break;
      case 8: rows = {criterion8()}; break;
      case 9: rows = criterion9(); break;
      case 10: rows = {criterion10()}; break;
    }
  } catch (const Error& e) {
    rows = {row(id, "criterion " + std::to_string(id))};
    rows.front().passed = false;
    rows.front().detail = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& row : rows) {
    row.seconds = secs;
    row.budget_seconds = kBudget[id];
  }
  if (secs > kBudget[id]) {
    rows.front().passed = false;
    append(rows.front().detail, fmt("runtime %.1f s exceeds %.0f s", secs, kBudget[id]));
  }
  return rows;
}

std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& sink) {
  std::vector<CriterionResult> all;
  for (int id = 1; id <= 10; ++id) {
    for (auto& row : run_criterion(id)) {
      if (sink) sink(row);
      all.push_back(std::move(row));
    }
  }
  return all;
}

std::string format_result(const CriterionResult& r) {
  const char* tag = r.informational ? (r.passed ? "info-pass" : "info-fail") : (r.passed ? "PASS" : "FAIL");
  return fmt("[%s] %2d %s (%.1f s): ", tag, r.id, r.name.c_str(), r.seconds) + r.detail;
}

bool all_passed(const std::vector<CriterionResult>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CriterionResult& r) { return r.informational || r.passed; });
}

}  // namespace magprop
