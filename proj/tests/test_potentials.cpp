#include <cmath>
#include <vector>

#include "doctest.h"
#include "magprop/error.hpp"
#include "magprop/galerkin.hpp"
#include "magprop/potentials.hpp"

using namespace magprop;

namespace {
std::vector<double> sampled(int n, double (*f)(double)) {
  std::vector<double> v(n);
  const auto t = grid::nodes(n);
  for (int i = 0; i < n; ++i) v[i] = f(t[i]);
  return v;
}
}  // namespace

TEST_CASE("circulation data of constant potentials") {
  const std::vector<double> zero(16, 0.0), ab(16, 0.3), big(16, 0.7);
  auto p = build_potential(zero, ab, 4);
  CHECK(p.a_tilde() == 0.0);
  CHECK(p.A_tilde() == doctest::Approx(0.3));
  CHECK(p.A_bar() == doctest::Approx(0.3));
  auto q = build_potential(zero, big, 4);
  CHECK(q.A_bar() == doctest::Approx(-0.3));
  CHECK(q.winding() == 1);
  CHECK(std::abs(q.A_tilde() - q.A_bar() - std::round(q.A_tilde() - q.A_bar())) < 1e-15);
}

TEST_CASE("cosine potential has modes +-1 only") {
  const auto a = sampled(32, [](double t) { return std::cos(t); });
  const std::vector<double> zero(32, 0.0);
  auto p = build_potential(a, zero, 6);
  CHECK(std::abs(p.a_tilde()) < 1e-15);
  for (int m = 2; m <= 6; ++m) CHECK(std::abs(p.a()[m]) < 1e-15);
  CHECK(std::abs(p.a()[1] - cplx(0.5)) < 1e-15);
  CHECK(std::abs(p.a()[-1] - cplx(0.5)) < 1e-15);
  CHECK(p.a_tilde() == p.a()[0].real());
}

TEST_CASE("invalid construction") {
  const std::vector<double> ok(16, 1.0);
  std::vector<double> bad(16, 1.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(build_potential(bad, ok, 4), Error);
  CHECK_THROWS_AS(build_potential(ok, ok, 0), Error);
  CHECK_THROWS_AS(build_potential(ok, ok, 8), Error);  // 16 < 17 samples
  FourierSeries complex_valued(1);
  complex_valued.at(1) = 1.0;  // e^{i theta} alone is not real
  CHECK_THROWS_AS(AngularPotential::from_coefficients(complex_valued, FourierSeries()), Error);
}

TEST_CASE("resonance classes") {
  CHECK(classify_resonance(AngularPotential::aharonov_bohm(0.3)) == ResonanceClass::NonResonant);
  CHECK(classify_resonance(AngularPotential::aharonov_bohm(2.0)) == ResonanceClass::IntegerCirculation);
  CHECK(classify_resonance(AngularPotential::aharonov_bohm(1.5)) == ResonanceClass::HalfIntegerCirculation);
  CHECK(AngularPotential::aharonov_bohm(1.5).A_bar() == doctest::Approx(-0.5));
  CHECK(AngularPotential::aharonov_bohm(0.5 - 1e-12).A_bar() == doctest::Approx(-0.5));
  for (double alpha : {-1.7, -0.5, 0.0, 0.25, 0.5, 0.9, 3.3}) {
    FourierSeries A(1);
    A.at(0) = alpha;
    A.at(1) = 0.1;
    A.at(-1) = 0.1;
    auto p = AngularPotential::from_coefficients(FourierSeries(), A);
    A.at(0) = alpha + 1.0;
    auto q = AngularPotential::from_coefficients(FourierSeries(), A);
    CHECK(classify_resonance(p) == classify_resonance(q));
    CHECK(p.A_bar() >= -0.5 - 1e-9);
    CHECK(p.A_bar() < 0.5);
  }
}

TEST_CASE("gauge transform examples") {
  const int n = 64;
  const auto t = grid::nodes(n);
  std::vector<cplx> e3(n), one(n, 1.0);
  for (int i = 0; i < n; ++i) e3[i] = std::polar(1.0, 3 * t[i]);
  auto free = AngularPotential::aharonov_bohm(0.0);
  auto g = gauge_transform(free, e3);
  for (int i = 0; i < n; ++i) CHECK(std::abs(g[i] - e3[i]) < 1e-15);

  auto integer = AngularPotential::aharonov_bohm(2.0);
  g = gauge_transform(integer, one);
  for (int i = 0; i < n; ++i) CHECK(std::abs(g[i] - std::polar(1.0, 2 * t[i])) < 1e-13);

  FourierSeries A(1);
  A.at(1) = 0.5;
  A.at(-1) = 0.5;
  auto cosA = AngularPotential::from_coefficients(FourierSeries(), A);
  g = gauge_transform(cosA, one);
  for (int i = 0; i < n; ++i) CHECK(std::abs(g[i] - std::polar(1.0, std::sin(t[i]))) < 1e-14);
}

TEST_CASE("gauge transform is an isometry and invertible") {
  FourierSeries A(2);
  A.at(0) = 0.37;
  A.at(1) = {0.2, -0.1};
  A.at(-1) = {0.2, 0.1};
  A.at(2) = 0.05;
  A.at(-2) = 0.05;
  auto p = AngularPotential::from_coefficients(FourierSeries(), A);
  const int n = 50;
  std::vector<cplx> phi(n);
  for (int i = 0; i < n; ++i) phi[i] = cplx(std::sin(0.3 * i), std::cos(1.1 * i));
  const auto g = gauge_transform(p, phi);
  CHECK(grid::l2_norm(g) == doctest::Approx(grid::l2_norm(phi)).epsilon(1e-14));
  const auto back = inverse_gauge_transform(p, g);
  for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - phi[i]) < 1e-14);
}

TEST_CASE("sample round trip") {
  FourierSeries a(3), A(2);
  a.at(0) = 1.0;
  a.at(3) = {0.3, 0.4};
  a.at(-3) = {0.3, -0.4};
  A.at(0) = -0.2;
  A.at(2) = {0.0, 0.25};
  A.at(-2) = {0.0, -0.25};
  auto p = AngularPotential::from_coefficients(a, A);
  const int n = 21;
  std::vector<double> as(n), As(n);
  const auto av = p.a().sample(n), Av = p.A().sample(n);
  for (int i = 0; i < n; ++i) {
    as[i] = av[i].real();
    As[i] = Av[i].real();
  }
  auto q = build_potential(as, As, 3);
  for (int m = -3; m <= 3; ++m) {
    CHECK(std::abs(q.a()[m] - p.a()[m]) < 1e-12);
    CHECK(std::abs(q.A()[m] - p.A()[m]) < 1e-12);
  }
}

TEST_CASE("hypothesis check") {
  auto ab = AngularPotential::aharonov_bohm(0.3);
  auto r = check_hypotheses(ab, solve_spectrum(ab, 16));
  CHECK(r.mu1 == doctest::Approx(0.09));
  CHECK(r.passed());
  auto free = AngularPotential::aharonov_bohm(0.0);
  r = check_hypotheses(free, solve_spectrum(free, 16));
  CHECK(std::abs(r.mu1) < 1e-12);
  CHECK_FALSE(r.passed());
  auto shift = AngularPotential::aharonov_bohm(0.0, 1.0);
  r = check_hypotheses(shift, solve_spectrum(shift, 16));
  CHECK(r.mu1 == doctest::Approx(1.0));
  CHECK(r.passed());
}

TEST_CASE("vector field is tangential") {
  auto p = AngularPotential::aharonov_bohm(0.4);
  for (double t : {0.0, 1.0, 2.5}) {
    const auto v = p.vector_field(t);
    CHECK(std::abs(v[0] * std::cos(t) + v[1] * std::sin(t)) < 1e-15);
    CHECK(std::hypot(v[0], v[1]) == doctest::Approx(0.4));
  }
}
