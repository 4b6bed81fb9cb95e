#include <cmath>

#include "doctest.h"
#include "magprop/config.hpp"
#include "magprop/error.hpp"

using namespace magprop;
using nlohmann::json;

namespace {

json cos_potential() {
  // a = cos theta, A = 0.3
  return json::parse(R"({"a_coeffs": [[0.5, 0], [0, 0], [0.5, 0]], "A_coeffs": [[0.3, 0]]})");
}

ErrorKind kind_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
  CHECK(hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("potential from coefficients and from samples") {
  const auto p = parse_potential(cos_potential());
  CHECK(p.a_tilde() == doctest::Approx(0.0));
  CHECK(p.A_tilde() == doctest::Approx(0.3));
  CHECK(std::abs(p.a()[1] - cplx(0.5, 0.0)) < 1e-15);

  json s;
  s["n_modes"] = 4;
  std::vector<double> a, A;
  for (int m = 0; m < 32; ++m) {
    const double t = kTwoPi * m / 32;
    a.push_back(std::cos(t));
    A.push_back(0.3);
  }
  s["a_samples"] = a;
  s["A_samples"] = A;
  const auto q = parse_potential(s);
  CHECK(std::abs(q.a()[1] - cplx(0.5, 0.0)) < 1e-14);
  CHECK(q.A_tilde() == doctest::Approx(0.3));
}

TEST_CASE("minimal config and defaults") {
  json doc;
  doc["potential"] = cos_potential();
  const auto cfg = parse_config(doc);
  CHECK(cfg.output_dir == ".");
  CHECK_FALSE(cfg.spectrum.has_value());
  CHECK(cfg.hash == fnv1a(doc.dump()));

  doc["spectrum"] = json::object();
  doc["kernel"] = {{"rho_max", 10.0}, {"ells", {2, 4}}};
  doc["decay"] = {{"t_range", {{"lo", 0.01}, {"hi", 1000.0}, {"count", 12}}}, {"oracle", {{"t", 0.5}, {"R", 16.0}}}};
  const auto full = parse_config(doc);
  REQUIRE(full.spectrum);
  CHECK(full.spectrum->j_min == 8);
  CHECK(full.kernel->grid.rho_max == 10.0);
  CHECK(full.kernel->grid.n_rho == 200);
  CHECK(full.kernel->ells == std::vector<int>{2, 4});
  REQUIRE(full.decay->t_list.size() == 12);
  CHECK(full.decay->t_list.front() == doctest::Approx(0.01));
  CHECK(full.decay->t_list.back() == doctest::Approx(1000.0));
  CHECK(full.decay->oracle->cn.R == 16.0);
  CHECK(full.decay->oracle->cn.h == 0.004);
}

TEST_CASE("hash ignores key order and whitespace") {
  const auto a = json::parse(R"({"seed": 3, "potential": {"A_coeffs": [[0.3,0]], "a_coeffs": [[1,0]]}})");
  const auto b = json::parse(R"({ "potential": {"a_coeffs": [[1, 0]], "A_coeffs": [[0.3, 0]]},
                                  "seed": 3 })");
  CHECK(parse_config(a).hash == parse_config(b).hash);
  auto c = a;
  c["seed"] = 4;
  CHECK(parse_config(c).hash != parse_config(a).hash);
}

TEST_CASE("schema violations are rejected") {
  json base;
  base["potential"] = cos_potential();

  SUBCASE("unknown top-level key") {
    auto d = base;
    d["sed"] = 1;
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("unknown nested key") {
    auto d = base;
    d["kernel"] = {{"rho_mx", 10.0}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("missing potential") {
    CHECK(kind_of(json::object()) == ErrorKind::InvalidInput);
  }
  SUBCASE("both coeffs and samples") {
    auto d = base;
    d["potential"]["a_samples"] = {1.0, 1.0};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("even coefficient list") {
    auto d = base;
    d["potential"]["A_coeffs"] = {{0.3, 0.0}, {0.0, 0.0}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("non-positive tolerance") {
    auto d = base;
    d["wkb"] = {{"tol", 0.0}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
    d["wkb"] = {{"tol", -1e-12}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("wrong type") {
    auto d = base;
    d["spectrum"] = {{"j_min", "eight"}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("unknown packet") {
    auto d = base;
    d["decay"] = {{"t_list", {1.0}}, {"packet", {{"type", "plane_wave"}}}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("zero time") {
    auto d = base;
    d["decay"] = {{"t_list", {0.0, 1.0}}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
  SUBCASE("non-real potential") {
    auto d = base;
    d["potential"]["a_coeffs"] = {{0.5, 0.1}, {0.0, 0.0}, {0.5, 0.1}};
    CHECK(kind_of(d) == ErrorKind::InvalidInput);
  }
}

TEST_CASE("load_config reports missing files and bad JSON") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}
