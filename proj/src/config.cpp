#include "magprop/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "magprop/error.hpp"

namespace magprop {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "config" + (where.empty() ? std::string() : " " + where) + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(where + "." + key, "wrong type");
  }
}

void positive(double v, const std::string& where) {
  if (!(v > 0.0)) fail(where, "must be positive");
}

void positive(int v, const std::string& where) {
  if (v <= 0) fail(where, "must be positive");
}

FourierSeries coeffs(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() % 2 == 0) fail(where, "expected an odd-length list of [re, im]");
  std::vector<cplx> c;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) fail(where, "entries must be [re, im]");
    c.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return FourierSeries(std::move(c));
}

std::vector<double> samples(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty list of numbers");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) fail(where, "entries must be numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

ScanGrid parse_grid(const json& j, ScanGrid g) {
  read(j, "rho_max", g.rho_max, "kernel");
  read(j, "n_rho", g.n_rho, "kernel");
  read(j, "n_theta", g.n_theta, "kernel");
  read(j, "n_theta_p", g.n_theta_p, "kernel");
  positive(g.rho_max, "kernel.rho_max");
  positive(g.n_rho, "kernel.n_rho");
  positive(g.n_theta, "kernel.n_theta");
  positive(g.n_theta_p, "kernel.n_theta_p");
  return g;
}

}  // namespace

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

AngularPotential parse_potential(const json& j) {
  allow_keys(j, "potential", {"a_coeffs", "a_samples", "A_coeffs", "A_samples", "n_modes"});
  for (const char* f : {"a", "A"}) {
    const std::string c = std::string(f) + "_coeffs", s = std::string(f) + "_samples";
    if (j.contains(c) == j.contains(s)) fail("potential", "exactly one of " + c + " and " + s + " is required");
  }
  const bool by_samples = j.contains("a_samples") || j.contains("A_samples");
  if (by_samples && !(j.contains("a_samples") && j.contains("A_samples")))
    fail("potential", "samples and coefficients cannot be mixed");
  if (by_samples) {
    int n_modes = 0;
    read(j, "n_modes", n_modes, "potential");
    positive(n_modes, "potential.n_modes");
    const auto a = samples(j.at("a_samples"), "potential.a_samples");
    const auto A = samples(j.at("A_samples"), "potential.A_samples");
    return build_potential(a, A, n_modes);
  }
  if (j.contains("n_modes")) fail("potential", "n_modes only applies to samples");
  return AngularPotential::from_coefficients(coeffs(j.at("a_coeffs"), "potential.a_coeffs"),
                                             coeffs(j.at("A_coeffs"), "potential.A_coeffs"));
}

ExperimentConfig parse_config(const json& doc) {
  allow_keys(doc, "", {"potential", "spectrum", "wkb", "kernel", "decay", "output_dir", "seed"});
  if (!doc.contains("potential")) fail("", "missing 'potential'");
  ExperimentConfig cfg;
  cfg.potential = parse_potential(doc.at("potential"));
  read(doc, "output_dir", cfg.output_dir, "");
  read(doc, "seed", cfg.seed, "");

  if (doc.contains("spectrum")) {
    const auto& j = doc.at("spectrum");
    allow_keys(j, "spectrum", {"truncation", "j_min", "j_max", "k_min", "k_max"});
    SpectrumSection s;
    read(j, "truncation", s.truncation, "spectrum");
    read(j, "j_min", s.j_min, "spectrum");
    read(j, "j_max", s.j_max, "spectrum");
    read(j, "k_min", s.k_min, "spectrum");
    read(j, "k_max", s.k_max, "spectrum");
    if (s.truncation < 0) fail("spectrum.truncation", "must be non-negative");
    positive(s.j_min, "spectrum.j_min");
    positive(s.k_min, "spectrum.k_min");
    if (s.j_max < s.j_min || s.k_max < s.k_min) fail("spectrum", "empty range");
    cfg.spectrum = s;
  }
  if (doc.contains("wkb")) {
    const auto& j = doc.at("wkb");
    allow_keys(j, "wkb", {"truncation", "j_min", "j_max", "tol"});
    WkbSection s;
    read(j, "truncation", s.truncation, "wkb");
    read(j, "j_min", s.j_min, "wkb");
    read(j, "j_max", s.j_max, "wkb");
    read(j, "tol", s.tol, "wkb");
    if (s.truncation < 0) fail("wkb.truncation", "must be non-negative");
    positive(s.j_min, "wkb.j_min");
    positive(s.tol, "wkb.tol");
    if (s.j_max < s.j_min) fail("wkb", "empty range");
    cfg.wkb = s;
  }
  if (doc.contains("kernel")) {
    const auto& j = doc.at("kernel");
    allow_keys(j, "kernel", {"truncation", "truncation_tol", "rho_max", "n_rho", "n_theta", "n_theta_p", "ells", "full_field"});
    KernelSection s;
    read(j, "truncation", s.truncation, "kernel");
    read(j, "truncation_tol", s.truncation_tol, "kernel");
    read(j, "ells", s.ells, "kernel");
    read(j, "full_field", s.full_field, "kernel");
    s.grid = parse_grid(j, s.grid);
    if (s.truncation < 0) fail("kernel.truncation", "must be non-negative");
    positive(s.truncation_tol, "kernel.truncation_tol");
    for (int l : s.ells) positive(l, "kernel.ells");
    cfg.kernel = s;
  }
  if (doc.contains("decay")) {
    const auto& j = doc.at("decay");
    allow_keys(j, "decay", {"truncation", "truncation_tol", "packet", "t_list", "t_range", "oracle", "snapshots"});
    DecaySection s;
    read(j, "truncation", s.truncation, "decay");
    read(j, "truncation_tol", s.truncation_tol, "decay");
    read(j, "snapshots", s.snapshots, "decay");
    if (s.truncation < 0) fail("decay.truncation", "must be non-negative");
    positive(s.truncation_tol, "decay.truncation_tol");
    if (j.contains("packet")) {
      const auto& p = j.at("packet");
      allow_keys(p, "decay.packet", {"type", "r0", "width", "index", "sigma", "n_theta", "panel_width"});
      auto& k = s.packet;
      read(p, "type", k.type, "decay.packet");
      read(p, "r0", k.r0, "decay.packet");
      read(p, "width", k.width, "decay.packet");
      read(p, "index", k.index, "decay.packet");
      read(p, "sigma", k.sigma, "decay.packet");
      read(p, "n_theta", k.n_theta, "decay.packet");
      read(p, "panel_width", k.panel_width, "decay.packet");
      if (k.type != "gaussian_ring" && k.type != "single_mode") fail("decay.packet.type", "unknown packet '" + k.type + "'");
      positive(k.width, "decay.packet.width");
      positive(k.sigma, "decay.packet.sigma");
      positive(k.n_theta, "decay.packet.n_theta");
      if (k.r0 < 0.0 || k.index < 0 || k.panel_width < 0.0) fail("decay.packet", "negative parameter");
    }
    if (j.contains("t_list") == j.contains("t_range")) fail("decay", "exactly one of t_list and t_range is required");
    if (j.contains("t_list")) {
      read(j, "t_list", s.t_list, "decay");
    } else {
      const auto& r = j.at("t_range");
      allow_keys(r, "decay.t_range", {"lo", "hi", "count"});
      double lo = 0.0, hi = 0.0;
      int count = 0;
      read(r, "lo", lo, "decay.t_range");
      read(r, "hi", hi, "decay.t_range");
      read(r, "count", count, "decay.t_range");
      positive(lo, "decay.t_range.lo");
      if (!(hi > lo) || count < 2) fail("decay.t_range", "need hi > lo and count >= 2");
      s.t_list = log_spaced(lo, hi, count);
    }
    if (s.t_list.empty()) fail("decay.t_list", "empty");
    for (double t : s.t_list)
      if (t == 0.0 || !std::isfinite(t)) fail("decay.t_list", "entries must be finite and non-zero");
    if (j.contains("oracle")) {
      const auto& o = j.at("oracle");
      allow_keys(o, "decay.oracle", {"t", "R", "h", "dt"});
      OracleSection os;
      read(o, "t", os.t, "decay.oracle");
      read(o, "R", os.cn.R, "decay.oracle");
      read(o, "h", os.cn.h, "decay.oracle");
      read(o, "dt", os.cn.dt, "decay.oracle");
      if (os.t == 0.0) fail("decay.oracle.t", "must be non-zero");
      positive(os.cn.R, "decay.oracle.R");
      positive(os.cn.h, "decay.oracle.h");
      positive(os.cn.dt, "decay.oracle.dt");
      s.oracle = os;
    }
    cfg.decay = s;
  }
  cfg.canonical = doc.dump();
  cfg.hash = fnv1a(cfg.canonical);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace magprop
