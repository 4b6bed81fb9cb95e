#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "magprop/electric.hpp"
#include "magprop/error.hpp"
#include "magprop/galerkin.hpp"

using namespace magprop;

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

AngularPotential electric(const FourierSeries& a) { return AngularPotential::from_coefficients(a, FourierSeries()); }

// Trapezoid rule for (1/pi) int a(t) cos(jt) dt on a fine grid.
double quadrature_cos_coeff(const AngularPotential& p, int j) {
  const int n = 4096;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    s += p.a()(t).real() * std::cos(j * t);
  }
  return s * (kTwoPi / n) / kPi;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("cosine coefficients") {
  auto p = electric(cosine(2, 1.0));
  CHECK(cos_fourier_coeff(p, 2) == doctest::Approx(1.0));
  for (int j : {0, 1, 3, 4, 7}) CHECK(std::abs(cos_fourier_coeff(p, j)) < 1e-15);

  auto c = electric(FourierSeries::constant(5.0));
  CHECK(cos_fourier_coeff(c, 0) == doctest::Approx(10.0));
  CHECK(cos_fourier_coeff(c, 3) == 0.0);

  auto mixed = electric(FourierSeries::constant(0.7) + cosine(1, 1.3) + cosine(3, -0.4) + sine(2, 0.9));
  for (int j = 0; j <= 6; ++j) CHECK(std::abs(cos_fourier_coeff(mixed, j) - quadrature_cos_coeff(mixed, j)) < 1e-13);
  CHECK_THROWS_AS(cos_fourier_coeff(mixed, -1), Error);
}

TEST_CASE("W^{1,inf} coefficient decay") {
  // Smoothed triangle wave: Lipschitz with kinks rounded by a Fejer-type taper.
  FourierSeries a(61);
  for (int m = 1; m <= 61; m += 2) {
    const double c = 4.0 / (kPi * m * m) * std::exp(-0.002 * m * m);
    a.at(m) = 0.5 * c;
    a.at(-m) = 0.5 * c;
  }
  auto p = electric(a);
  const double lip = 2.0;
  double worst = 0.0;
  for (int k = 1; k <= 30; ++k) worst = std::max(worst, k * std::abs(cos_fourier_coeff(p, 2 * k)));
  CHECK(worst <= lip);
}

TEST_CASE("symmetry detection") {
  CHECK(is_symmetric_about_pi(electric(cosine(1, 1.0) + cosine(4, 2.0))));
  CHECK_FALSE(is_symmetric_about_pi(electric(cosine(1, 1.0) + sine(3, 0.3))));
  CHECK_THROWS_AS(corrector(electric(sine(1, 0.2)), 3), Error);
  try {
    corrector(electric(sine(1, 0.2)), 3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SymmetryViolation);
  }
}

TEST_CASE("corrector") {
  SUBCASE("constant potential gives zero") {
    auto phi = corrector(electric(FourierSeries::constant(3.0)), 4);
    for (double v : phi) CHECK(v == 0.0);
  }
  SUBCASE("cos 2theta, k = 5 against a direct sine sum") {
    auto p = electric(cosine(2, 1.0));
    const int k = 5;
    const int n = electric_grid_size(p, k);
    auto phi = corrector(p, k, Parity::Sin, n);
    // Oracle: expand (a - a_tilde) sin(kx) by product-to-sum and divide mode by mode.
    // cos 2x sin 5x = (sin 7x + sin 3x) / 2, so -phi'' - 25 phi = -(sin 7x + sin 3x)/2.
    double err = 0.0, res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = kTwoPi * i / n;
      const double b7 = -0.5 / (49.0 - 25.0), b3 = -0.5 / (9.0 - 25.0);
      const double ref = b7 * std::sin(7 * x) + b3 * std::sin(3 * x);
      err = std::max(err, std::abs(phi[i] - ref));
      const double lhs = 49.0 * b7 * std::sin(7 * x) + 9.0 * b3 * std::sin(3 * x) - 25.0 * ref;
      res = std::max(res, std::abs(lhs - (0.0 - std::cos(2 * x)) * std::sin(5 * x)));
    }
    CHECK(err < 1e-14);
    CHECK(res < 1e-10);
  }
  SUBCASE("cosine parity solves its own equation") {
    auto p = electric(FourierSeries::constant(0.4) + cosine(1, 1.0) + cosine(3, 0.5));
    for (int k : {1, 2, 3, 6}) CHECK_NOTHROW(corrector(p, k, Parity::Cos));
    // k = 1 cosine: constant term a_{c,1}/(2k^2) = 0.5
    auto phi = corrector(p, 1, Parity::Cos);
    double mean = 0.0;
    for (double v : phi) mean += v;
    mean /= phi.size();
    CHECK(mean == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("k ||phi_k|| stays bounded") {
    auto p = electric(cosine(1, 1.0) + cosine(2, 2.0) + cosine(5, 0.5));
    std::vector<double> scaled;
    for (int k = 4; k <= 64; ++k) {
      auto phi = corrector(p, k);
      double sup = 0.0;
      for (double v : phi) sup = std::max(sup, std::abs(v));
      scaled.push_back(k * sup);
    }
    const double hi = *std::max_element(scaled.begin(), scaled.end());
    const double lo = *std::min_element(scaled.begin() + 8, scaled.end());
    CHECK(hi < 5.0);
    CHECK(lo > 0.1);  // the corrector is not trivially zero
    CHECK(scaled.back() <= 1.05 * scaled[20]);
  }
}

TEST_CASE("electric eigenpairs against Galerkin") {
  auto p = electric(cosine(2, 2.0));
  auto spec = solve_spectrum(p, 128);

  SUBCASE("k = 1 Stark splitting") {
    auto s = electric_eigenpair(p, 1, Parity::Sin);
    auto c = electric_eigenpair(p, 1, Parity::Cos);
    CHECK(s.lambda_prediction == doctest::Approx(0.0));
    CHECK(c.lambda_prediction == doctest::Approx(2.0));
    // Mathieu b_1(q=1) and a_1(q=1)
    CHECK(std::abs(s.lambda_corrected - (-0.11024881699209819)) < 1e-9);
    CHECK(std::abs(c.lambda_corrected - 1.8591080725135805) < 1e-9);
    const double split = c.lambda_corrected - s.lambda_corrected;
    CHECK(std::abs(split - cos_fourier_coeff(p, 2)) < 0.1);
  }
  SUBCASE("k = 10 sine: first-order term vanishes") {
    auto s = electric_eigenpair(p, 10, Parity::Sin);
    CHECK(s.lambda_prediction == doctest::Approx(100.0));
    const double gal = spec.eigenvalues[static_cast<std::size_t>(nearest_eigenvalue(spec, s.lambda_corrected))];
    CHECK(std::abs(s.lambda_corrected - gal) < 1e-9);
    CHECK(std::abs(s.lambda_corrected - s.lambda_prediction) < 1.0 / 10);
  }
  SUBCASE("scaled deviations are bounded for k in [4, 32]") {
    for (auto par : {Parity::Sin, Parity::Cos}) {
      std::vector<double> ks, dev;
      for (int k = 4; k <= 32; k += 2) {
        auto e = electric_eigenpair(p, k, par);
        CHECK(e.eigen_residual < 1e-9 * k * k);
        const double gal = spec.eigenvalues[static_cast<std::size_t>(nearest_eigenvalue(spec, e.lambda_corrected))];
        CHECK(std::abs(e.lambda_corrected - gal) < 1e-9 * k * k);
        ks.push_back(k);
        dev.push_back(k * std::abs(e.lambda_corrected - e.lambda_prediction));
        CHECK(k * e.remainder_sup < 1.0);
      }
      CHECK(slope(ks, dev) <= 0.2);
    }
  }
}

TEST_CASE("constant potential is exact") {
  auto p = electric(FourierSeries::constant(2.5));
  for (auto par : {Parity::Sin, Parity::Cos}) {
    auto e = electric_eigenpair(p, 7, par);
    CHECK(e.lambda_corrected == doctest::Approx(49.0 + 2.5).epsilon(1e-15));
    CHECK(e.remainder_sup < 1e-15);
  }
}

TEST_CASE("magnetic input is rejected") {
  auto p = AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.3));
  CHECK_THROWS_AS(electric_eigenpair(p, 3, Parity::Sin), Error);
}

TEST_CASE("threshold discovery") {
  auto p = electric(cosine(2, 2.0));
  CHECK(electric_threshold(p, Parity::Sin, 12) == 1);
  // Strong potential: small k cannot contract
  auto strong = electric(cosine(1, 40.0));
  const int k0 = electric_threshold(strong, Parity::Sin, 40);
  CHECK(k0 > 1);
  CHECK(k0 <= 40);
}

TEST_CASE("parity selection") {
  auto p = electric(FourierSeries::constant(0.2) + cosine(1, 1.0) + cosine(2, 2.0) + cosine(3, -0.7));
  auto spec = solve_spectrum(p, 64);
  for (int k = 0; k < spec.resolved_count; ++k) {
    const auto& v = spec.eigenvectors.col(k);
    const int M = spec.truncation;
    double even = 0.0, odd = 0.0;
    for (int m = 1; m <= M; ++m) {
      even += std::norm(v(M + m) + v(M - m));
      odd += std::norm(v(M + m) - v(M - m));
    }
    even += 2.0 * std::norm(v(M));
    const double angle = std::sqrt(std::min(even, odd) / 2.0);
    CHECK(angle < 1e-6);
  }
}

TEST_CASE("nonsymmetric reduction") {
  SUBCASE("zero potential") {
    auto p = electric(FourierSeries::constant(0.0));
    auto spec = solve_spectrum(p, 32);
    for (int j : {1, 5, 12}) {
      for (const auto& f : reduce_nonsymmetric(p, spec, j)) {
        CHECK(f.R_sup < 1e-12);
        CHECK(std::abs(f.eigen_residual) < 1e-12);
      }
    }
  }
  SUBCASE("symmetric potential gives the sin/cos shifts") {
    auto p = electric(cosine(2, 2.0));
    auto spec = solve_spectrum(p, 128);
    for (int j : {10, 17, 30}) {
      auto fits = reduce_nonsymmetric(p, spec, j);
      REQUIRE(fits.size() == 2);
      const double period = kPi / j;
      auto circ = [&](double a, double b) {
        const double d = std::fmod(std::abs(a - b), period);
        return std::min(d, period - d);
      };
      const double t0 = std::min(circ(fits[0].theta, 0.0), circ(fits[1].theta, 0.0));
      const double t1 = std::min(circ(fits[0].theta, 0.5 * period), circ(fits[1].theta, 0.5 * period));
      CHECK(t0 < 1e-6);
      CHECK(t1 < 1e-6);
      for (const auto& f : fits) CHECK(j * f.R_sup < 1.0);
    }
  }
  SUBCASE("a = cos + 0.3 sin 3theta") {
    auto p = electric(cosine(1, 1.0) + sine(3, 0.3));
    auto spec = solve_spectrum(p, 128);
    std::vector<double> js, scaled;
    for (int j = 10; j <= 40; j += 3) {
      for (const auto& f : reduce_nonsymmetric(p, spec, j)) {
        CHECK_FALSE(f.ambiguous);
        js.push_back(j);
        scaled.push_back(f.scaled_R_sup);
        CHECK(f.scaled_R_sup < 0.35);
        CHECK(j * j * std::abs(f.eigen_residual) < 0.2);
      }
    }
    CHECK(slope(js, scaled) <= 0.2);
  }
  SUBCASE("magnetic input rejected") {
    auto p = AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.3));
    auto spec = solve_spectrum(p, 32);
    CHECK_THROWS_AS(reduce_nonsymmetric(p, spec, 3), Error);
  }
}

TEST_CASE("half-integer circulation") {
  SUBCASE("AB 1/2 is exact") {
    auto p = AngularPotential::aharonov_bohm(0.5);
    auto spec = solve_spectrum(p, 64);
    for (const auto& f : half_integer_spectrum(p, spec, 1, 40)) {
      CHECK(std::abs(f.eigen_residual) < 1e-10);
      CHECK(f.R_sup < 1e-10);
    }
  }
  SUBCASE("a = cos, A = 0.5 and its gauge twin") {
    auto p = AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.5));
    auto q = AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.5) + cosine(1, 0.2));
    auto sp = solve_spectrum(p, 128);
    auto sq = solve_spectrum(q, 128);
    auto tp = half_integer_spectrum(p, sp, 8, 40);
    auto tq = half_integer_spectrum(q, sq, 8, 40);
    REQUIRE(tp.size() == tq.size());
    std::vector<double> js, scaled, eig;
    for (std::size_t i = 0; i < tp.size(); ++i) {
      CHECK(tp[i].j == tq[i].j);
      CHECK(std::abs(tp[i].eigen_residual - tq[i].eigen_residual) < 1e-9);
      CHECK(std::abs(tp[i].R_sup - tq[i].R_sup) < 1e-8);
      js.push_back(std::abs(tp[i].j));
      scaled.push_back(tp[i].scaled_R_sup);
      eig.push_back(tp[i].scaled_eigen_residual);
      CHECK(tp[i].scaled_R_sup < 0.6);
    }
    CHECK(slope(js, scaled) <= 0.2);
    CHECK(slope(js, eig) <= 0.2);
  }
  SUBCASE("wrong class") {
    auto p = AngularPotential::from_coefficients(cosine(1, 1.0), FourierSeries::constant(0.3));
    auto spec = solve_spectrum(p, 32);
    CHECK_THROWS_AS(half_integer_spectrum(p, spec, 2, 4), Error);
    CHECK_THROWS_AS(integer_circulation_spectrum(p, spec, 2, 4), Error);
  }
}

TEST_CASE("integer circulation") {
  // A = 1 + 0.2 cos is gauge-equivalent to A = 0.2 cos with winding 1.
  auto p = AngularPotential::from_coefficients(cosine(2, 2.0), FourierSeries::constant(1.0) + cosine(1, 0.2));
  auto spec = solve_spectrum(p, 128);
  auto rows = integer_circulation_spectrum(p, spec, 6, 30);
  for (const auto& f : rows) {
    CHECK(f.scaled_R_sup < 1.0);
    CHECK(f.scaled_eigen_residual < 1.0);
  }
}

TEST_CASE("doubling identity") {
  // cos(x - s) + 0.6 cos(2(x - s)) is symmetric about s.
  const double s = 0.7;
  FourierSeries shifted(2);
  shifted.at(1) = 0.5 * std::polar(1.0, -s);
  shifted.at(-1) = 0.5 * std::polar(1.0, s);
  shifted.at(2) = 0.3 * std::polar(1.0, -2 * s);
  shifted.at(-2) = 0.3 * std::polar(1.0, 2 * s);
  const std::vector<std::pair<FourierSeries, double>> cases = {
      {cosine(1, 1.0), 0.0},
      {FourierSeries::constant(0.5) + cosine(1, 1.0) + cosine(3, -0.6), 0.0},
      {shifted, s},
  };
  for (const auto& [a, theta_bar] : cases) {
    auto p = electric(a);
    auto d = doubled_potential(p, theta_bar);
    auto periodic = solve_spectrum(p, 64);
    auto anti = solve_spectrum(AngularPotential::from_coefficients(p.a(), FourierSeries::constant(0.5)), 64);
    auto doubled = solve_spectrum(d, 128);
    std::vector<double> uni;
    for (int k = 0; k < 40; ++k) {
      uni.push_back(4.0 * periodic.eigenvalues[static_cast<std::size_t>(k)]);
      uni.push_back(4.0 * anti.eigenvalues[static_cast<std::size_t>(k)]);
    }
    std::sort(uni.begin(), uni.end());
    for (int k = 0; k < 60; ++k)
      CHECK(std::abs(doubled.eigenvalues[static_cast<std::size_t>(k)] - uni[static_cast<std::size_t>(k)]) <
            1e-9 * std::max(1.0, std::abs(uni[static_cast<std::size_t>(k)])));
    // Every original eigenvalue, scaled by 4, is an eigenvalue of the doubled problem.
    for (int k = 0; k < 20; ++k) {
      const double target = 4.0 * periodic.eigenvalues[static_cast<std::size_t>(k)];
      const int i = nearest_eigenvalue(doubled, target);
      CHECK(std::abs(doubled.eigenvalues[static_cast<std::size_t>(i)] - target) < 1e-9 * std::max(1.0, target));
    }
  }
  CHECK_THROWS_AS(doubled_potential(electric(cosine(1, 1.0) + sine(2, 0.4)), 0.0), Error);
}
