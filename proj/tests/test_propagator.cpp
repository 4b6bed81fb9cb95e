#include <cmath>
#include <string>

#include "doctest.h"
#include "magprop/error.hpp"
#include "magprop/propagator.hpp"

using namespace magprop;

namespace {

FourierSeries cosine(int m, double amp) {
  FourierSeries f(m);
  f.at(m) += 0.5 * amp;
  if (m != 0) f.at(-m) += 0.5 * amp;
  return f;
}

// Exact solution of i u_t = -u'' - u'/r + nu^2 u / r^2 for r^nu e^{-r^2/2 sigma^2}.
InitialData laguerre_gauss(const FourierSeries& psi, double nu, double sigma, double t) {
  return [=](double r, double theta) {
    const cplx s2 = sigma * sigma + cplx(0.0, 2.0 * t);
    return std::pow(r, nu) * std::pow(sigma * sigma / s2, nu + 1.0) * std::exp(-r * r / (2.0 * s2)) * psi(theta);
  };
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

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("radial quadrature") {
  auto g = gauss_panels(3.0, 0.5);
  double a = 0.0, b = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    a += g.w[static_cast<std::size_t>(i)];
    b += g.w[static_cast<std::size_t>(i)] * std::pow(g.r[static_cast<std::size_t>(i)], 0.6);
  }
  CHECK(a == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(std::abs(b - std::pow(3.0, 2.6) / 2.6) < 1e-9);
  CHECK(g.r_max == 3.0);
  CHECK(g.max_spacing == doctest::Approx(0.5 / 12));
  CHECK_THROWS_AS(gauss_panels(-1.0, 0.1), Error);
}

TEST_CASE("wave packet norms") {
  auto ring = WavePacket::sample(gauss_panels(ring_support(2.0, 0.3), 0.05), 8, gaussian_ring(2.0, 0.3));
  // int exp(-(r-2)^2/(2 w^2)) r dr over r > 0 with the negligible r < 0 part included
  const double w = 0.3;
  const double l1 = kTwoPi * 2.0 * w * std::sqrt(kTwoPi);
  CHECK(ring.l1_norm == doctest::Approx(l1).epsilon(1e-8));
  CHECK(ring.l2_norm * ring.l2_norm == doctest::Approx(kTwoPi * 2.0 * w * std::sqrt(kPi)).epsilon(1e-8));
  CHECK(ring.sup_norm() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("single-mode AB evolution against the closed form") {
  const double alpha = 0.3, sigma = 0.5;
  auto ks = ab_kernel_spec(alpha, 40, 1e-12);
  const auto psi = FourierSeries::single_mode(1, 1.0 / std::sqrt(kTwoPi));
  const double nu = 1.3;
  auto u0 = WavePacket::sample(gauss_panels(4.5, 0.03), 16, single_mode_packet(psi, nu, sigma));
  const auto out = uniform_cells(10.0, 0.01);
  EvolveOptions o;
  o.output = &out;
  for (double t : {0.5, -0.5, 2.0, 0.05}) {
    auto r = evolve(ks, u0, t, o);
    CHECK(r.modes_used == 1);
    auto exact = WavePacket::sample(out, 16, laguerre_gauss(psi, nu, sigma, t));
    CHECK(relative_l2(r.field, exact) < 1e-9);
  }
  // adaptive output grid conserves mass
  for (double t : {0.1, 1.0, 30.0}) {
    auto r = evolve(ks, u0, t);
    CHECK(std::abs(r.l2_norm / u0.l2_norm - 1.0) < 1e-10);
    CHECK(std::abs(r.field.l2_norm / u0.l2_norm - 1.0) < 1e-8);
  }
}

TEST_CASE("zero data") {
  auto ks = ab_kernel_spec(0.3, 20, 1e-12);
  auto u0 = WavePacket::sample(gauss_panels(3.0, 0.2), 8, [](double, double) { return cplx(0.0); });
  auto r = evolve(ks, u0, 1.0);
  CHECK(r.sup_norm == 0.0);
  CHECK(r.modes_used == 0);
  CHECK_THROWS_AS(evolve(ks, u0, 0.0), Error);
}

TEST_CASE("group property") {
  auto ks = ab_kernel_spec(-0.25, 40, 1e-12);
  const auto psi = FourierSeries::single_mode(0, 1.0 / std::sqrt(kTwoPi));
  const double nu = 0.25, sigma = 0.6;
  auto u0 = WavePacket::sample(gauss_panels(5.0, 0.1), 16, single_mode_packet(psi, nu, sigma));
  const auto fine = gauss_panels(9.0, 0.04);
  EvolveOptions to_fine;
  to_fine.output = &fine;
  auto mid = evolve(ks, u0, 0.3, to_fine).field;
  const auto out = uniform_cells(10.0, 0.01);
  EvolveOptions o;
  o.output = &out;
  auto two_step = evolve(ks, mid, 0.2, o);
  auto exact = WavePacket::sample(out, 16, laguerre_gauss(psi, nu, sigma, 0.5));
  CHECK(relative_l2(two_step.field, exact) < 1e-8);
}

TEST_CASE("scaling covariance") {
  auto ks = ab_kernel_spec(0.3, 40, 1e-12);
  const double lam = 2.0, t = 0.4;
  auto f = gaussian_ring(1.5, 0.3);
  auto f_lam = [&](double r, double th) { return f(r / lam, th); };
  auto u = WavePacket::sample(gauss_panels(ring_support(1.5, 0.3), 0.02), 8, f);
  auto u_lam = WavePacket::sample(gauss_panels(lam * ring_support(1.5, 0.3), 0.02), 8, f_lam);
  auto grid = uniform_cells(6.0, 0.02);
  RadialGrid scaled = grid;
  for (auto& r : scaled.r) r *= lam;
  for (auto& w : scaled.w) w *= lam * lam;
  scaled.r_max *= lam;
  EvolveOptions a, b;
  a.output = &grid;
  b.output = &scaled;
  auto small = evolve(ks, u, t, a);
  auto big = evolve(ks, u_lam, lam * lam * t, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < small.field.values.size(); ++i)
    worst = std::max(worst, std::abs(small.field.values[i] - big.field.values[i]));
  CHECK(worst < 1e-6);
}

TEST_CASE("resolution and bandwidth errors") {
  auto ks = ab_kernel_spec(0.3, 40, 1e-12);
  auto coarse = WavePacket::sample(gauss_panels(ring_support(2.0, 0.3), 0.5), 8, gaussian_ring(2.0, 0.3));
  try {
    evolve(ks, coarse, 0.01);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResolutionError);
    CHECK(std::string(e.what()).find("gauss_panels") != std::string::npos);
  }
  auto narrow = ab_kernel_spec(0.3, 3, 1e-12);
  const auto psi = FourierSeries::single_mode(5, 1.0 / std::sqrt(kTwoPi));
  auto u0 = WavePacket::sample(gauss_panels(4.0, 0.1), 32, single_mode_packet(psi, 5.3, 0.5));
  CHECK(kind_of([&] { evolve(narrow, u0, 1.0); }) == ErrorKind::InvalidInput);
}

TEST_CASE("decay profile") {
  auto ks = ab_kernel_spec(0.3, 40, 1e-12);
  auto ring = WavePacket::sample(gauss_panels(ring_support(2.0, 0.3), 0.02), 8, gaussian_ring(2.0, 0.3));
  auto prof = decay_profile(ks, ring, {1.0, 10.0, 100.0, 1000.0});
  REQUIRE(prof.rows.size() == 4);
  CHECK(prof.max_l2_defect < 1e-10);
  // free-like spreading: |t| sup|u| / ||u0||_1 settles near 1/(4 pi)
  CHECK(std::abs(prof.rows.back().decay_functional - prof.rows[2].decay_functional) < 1e-3);
  CHECK(prof.max_functional < 0.1);
  CHECK(prof.max_functional / prof.median_functional <= 3.0);
  auto ts = log_spaced(1e-2, 1e3, 12);
  CHECK(ts.front() == doctest::Approx(1e-2));
  CHECK(ts.back() == doctest::Approx(1e3));
}

TEST_CASE("Crank-Nicolson oracle") {
  auto ks = ab_kernel_spec(0.3, 40, 1e-12);
  const auto psi = FourierSeries::single_mode(1, 1.0 / std::sqrt(kTwoPi));
  const double nu = 1.3, sigma = 0.5;
  CnParams prm;
  auto cn = crank_nicolson_oracle(ks, single_mode_packet(psi, nu, sigma), 16, 0.5, prm);
  CHECK(cn.steps == 2000);
  CHECK(cn.boundary_mass < 1e-8);
  auto exact = WavePacket::sample(cn.field.grid, 16, laguerre_gauss(psi, nu, sigma, 0.5));
  CHECK(relative_l2(cn.field, exact) < 1e-3);
  CHECK(std::abs(cn.field.l2_norm / exact.l2_norm - 1.0) < 1e-6);

  SUBCASE("short times approach the data") {
    CnParams fine = prm;
    fine.dt = 1e-5;
    auto near = crank_nicolson_oracle(ks, single_mode_packet(psi, nu, sigma), 16, 1e-3, fine);
    auto init = WavePacket::sample(near.field.grid, 16, single_mode_packet(psi, nu, sigma));
    CHECK(relative_l2(near.field, init) < 2e-2);
  }
  SUBCASE("boundary contact is reported") {
    CnParams tight = prm;
    tight.R = 3.0;
    tight.h = 0.01;
    CHECK(kind_of([&] { crank_nicolson_oracle(ks, single_mode_packet(psi, nu, sigma), 16, 2.0, tight); }) ==
          ErrorKind::ResolutionError);
  }
}

TEST_CASE("representation formula versus Crank-Nicolson on a non-AB potential") {
  auto p = AngularPotential::from_coefficients(FourierSeries::constant(1.0) + cosine(1, 1.0), FourierSeries::constant(0.3));
  auto ks = make_kernel_spec(p, solve_spectrum(p, 48), 1e-12);
  auto f = gaussian_ring(2.0, 0.5);
  CnParams prm;
  prm.R = 16.0;
  auto cn = crank_nicolson_oracle(ks, f, 16, 0.5, prm);
  auto u0 = WavePacket::sample(gauss_panels(ring_support(2.0, 0.5), 0.1), 16, f);
  EvolveOptions o;
  o.output = &cn.field.grid;
  auto rep = evolve(ks, u0, 0.5, o);
  CHECK(rep.modes_used > 1);
  CHECK(relative_l2(rep.field, cn.field) < 1e-3);
}

TEST_CASE("a = 1 is an inverse-square potential") {
  auto p = AngularPotential::from_coefficients(FourierSeries::constant(1.0), FourierSeries());
  auto ks = make_kernel_spec(p, solve_spectrum(p, 16), 1e-12);
  const double sigma = 0.5, t = 0.5;
  const auto psi0 = FourierSeries::constant(1.0 / std::sqrt(kTwoPi));
  const auto out = uniform_cells(10.0, 0.01);
  EvolveOptions o;
  o.output = &out;
  // r e^{-r^2/2 sigma^2}: the nu = 1 Laguerre-Gauss state of -Delta + 1/r^2
  auto u0 = WavePacket::sample(gauss_panels(4.0, 0.1), 16, single_mode_packet(psi0, 1.0, sigma));
  auto r = evolve(ks, u0, t, o);
  CHECK(relative_l2(r.field, WavePacket::sample(out, 16, laguerre_gauss(psi0, 1.0, sigma, t))) < 1e-9);
  // e^{-it} times the free Gaussian is not a solution here
  auto g = WavePacket::sample(gauss_panels(4.0, 0.1), 16, [&](double x, double) { return cplx(std::exp(-x * x / (2 * sigma * sigma))); });
  auto rg = evolve(ks, g, t, o);
  auto shifted_free = WavePacket::sample(out, 16, [&](double x, double) {
    const cplx s2 = sigma * sigma + cplx(0.0, 2.0 * t);
    return std::exp(cplx(0.0, -t)) * (sigma * sigma / s2) * std::exp(-x * x / (2.0 * s2));
  });
  CHECK(relative_l2(rg.field, shifted_free) > 0.5);
}
