#include "magprop/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "magprop/bessel.hpp"
#include "magprop/error.hpp"

namespace magprop {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1], Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

void add_panel(RadialGrid& g, double a, double b, const std::vector<double>& x, const std::vector<double>& w) {
  const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = mid + half * x[i];
    g.r.push_back(r);
    g.w.push_back(half * w[i] * r);
  }
}

constexpr double kGradeRatio = 0.15;
constexpr int kGradeLevels = 4;

// Panels [a, a + width) with the first one graded when a = 0.
void append_panel(RadialGrid& g, double a, double b, int nodes) {
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  if (a == 0.0) {
    double lo = 0.0;
    for (int l = kGradeLevels; l >= 0; --l) {
      const double hi = b * std::pow(kGradeRatio, l);
      add_panel(g, lo, hi, x, w);
      lo = hi;
    }
  } else {
    add_panel(g, a, b, x, w);
  }
  g.max_spacing = std::max(g.max_spacing, (b - a) / nodes);
  g.r_max = b;
}

std::vector<std::vector<cplx>> project(const KernelSpec& ks, const WavePacket& u0, double bandwidth_tol) {
  const int n = u0.n_theta;
  const int N = u0.grid.size();
  std::vector<std::vector<cplx>> coeff(static_cast<std::size_t>(N));
  double top = 0.0, total = 0.0;
  for (int i = 0; i < N; ++i) {
    std::vector<cplx> row(u0.values.begin() + static_cast<long>(i) * n, u0.values.begin() + static_cast<long>(i + 1) * n);
    coeff[static_cast<std::size_t>(i)] = grid::forward(row);
    for (int k = 0; k < n; ++k) {
      const double m2 = std::norm(coeff[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) * u0.grid.w[static_cast<std::size_t>(i)];
      total += m2;
      if (std::abs(grid::mode_of(k, n)) >= n / 4) top += m2;
    }
  }
  if (total > 0.0 && top > 1e-24 * total) throw Error(ErrorKind::InvalidInput, "angular grid under-resolves the initial data");

  std::vector<std::vector<cplx>> uk(static_cast<std::size_t>(ks.size()), std::vector<cplx>(static_cast<std::size_t>(N)));
  double captured = 0.0;
  for (int k = 0; k < ks.size(); ++k) {
    const auto& psi = ks.psi[static_cast<std::size_t>(k)];
    for (int i = 0; i < N; ++i) {
      cplx s(0.0);
      for (int m = -psi.max_mode(); m <= psi.max_mode(); ++m) {
        if (std::abs(m) >= (n + 1) / 2) continue;
        s += coeff[static_cast<std::size_t>(i)][static_cast<std::size_t>((m + n) % n)] * std::conj(psi[m]);
      }
      uk[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = kTwoPi * s;
      captured += std::norm(kTwoPi * s) * u0.grid.w[static_cast<std::size_t>(i)];
    }
  }
  const double mass = total * kTwoPi;
  if (mass > 0.0 && std::abs(mass - captured) > bandwidth_tol * mass)
    throw Error(ErrorKind::InvalidInput, "initial data is not resolved by the eigenbasis");
  return uk;
}

double radial_norm(const std::vector<cplx>& f, const RadialGrid& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]) * g.w[i];
  return std::sqrt(s);
}

std::string suggestion(double r_max, double omega) {
  const double spacing = kPi / (8.0 * omega);
  char buf[256];
  std::snprintf(buf, sizeof buf, "radial spacing must be <= %.3g; try gauss_panels(%.6g, %.3g)", spacing, r_max,
                12.0 * spacing);
  return buf;
}

}  // namespace

RadialGrid gauss_panels(double r_max, double panel_width, int nodes) {
  if (!(r_max > 0.0) || !(panel_width > 0.0) || nodes < 2) throw Error(ErrorKind::InvalidInput, "bad radial grid");
  RadialGrid g;
  const int panels = std::max(1, static_cast<int>(std::ceil(r_max / panel_width - 1e-12)));
  const double width = r_max / panels;
  for (int p = 0; p < panels; ++p) append_panel(g, p * width, (p + 1) * width, nodes);
  return g;
}

WavePacket WavePacket::sample(const RadialGrid& grid, int n_theta, const InitialData& f) {
  WavePacket u;
  u.grid = grid;
  u.n_theta = n_theta;
  u.values.resize(static_cast<std::size_t>(grid.size() * n_theta));
  const auto th = grid::nodes(n_theta);
  for (int i = 0; i < grid.size(); ++i)
    for (int m = 0; m < n_theta; ++m)
      u.values[static_cast<std::size_t>(i * n_theta + m)] = f(grid.r[static_cast<std::size_t>(i)], th[static_cast<std::size_t>(m)]);
  u.update_norms();
  return u;
}

double WavePacket::sup_norm() const {
  double s = 0.0;
  for (const auto& v : values) s = std::max(s, std::abs(v));
  return s;
}

void WavePacket::update_norms() {
  double l1 = 0.0, l2 = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    double a1 = 0.0, a2 = 0.0;
    for (int m = 0; m < n_theta; ++m) {
      a1 += std::abs(at(i, m));
      a2 += std::norm(at(i, m));
    }
    l1 += a1 * grid.w[static_cast<std::size_t>(i)];
    l2 += a2 * grid.w[static_cast<std::size_t>(i)];
  }
  l1_norm = l1 * kTwoPi / n_theta;
  l2_norm = std::sqrt(l2 * kTwoPi / n_theta);
}

InitialData gaussian_ring(double r0, double width) {
  return [=](double r, double) { return cplx(std::exp(-0.5 * (r - r0) * (r - r0) / (width * width))); };
}

InitialData single_mode_packet(const FourierSeries& psi, double nu, double sigma) {
  return [=](double r, double theta) { return std::pow(r, nu) * std::exp(-0.5 * r * r / (sigma * sigma)) * psi(theta); };
}

double ring_support(double r0, double width) { return r0 + width * std::sqrt(2.0 * std::log(1e16)); }

EvolutionResult evolve(const KernelSpec& ks, const WavePacket& u0, double t, const EvolveOptions& opts) {
  if (t == 0.0 || !std::isfinite(t)) throw Error(ErrorKind::InvalidInput, "t must be finite and non-zero");
  const double at = std::abs(t);
  const double sg = t > 0.0 ? 1.0 : -1.0;
  const int n_out = opts.n_theta_out > 0 ? opts.n_theta_out : u0.n_theta;
  const double R0 = u0.grid.r_max;

  EvolutionResult res;
  res.t = t;
  res.field.n_theta = n_out;

  const auto uk = project(ks, u0, opts.bandwidth_tol);
  const double norm0 = u0.l2_norm;
  std::vector<int> active;
  for (int k = 0; k < ks.size(); ++k)
    if (radial_norm(uk[static_cast<std::size_t>(k)], u0.grid) > opts.mode_cutoff * norm0) active.push_back(k);
  res.modes_used = static_cast<int>(active.size());

  // g_k(r') = w' e^{i r'^2/4t} u_k(r'), with r' dr' already inside w'.
  const int N_in = u0.grid.size();
  std::vector<std::vector<cplx>> g(active.size(), std::vector<cplx>(static_cast<std::size_t>(N_in)));
  for (std::size_t a = 0; a < active.size(); ++a)
    for (int j = 0; j < N_in; ++j) {
      const double r = u0.grid.r[static_cast<std::size_t>(j)];
      g[a][static_cast<std::size_t>(j)] = u0.grid.w[static_cast<std::size_t>(j)] * std::polar(1.0, sg * r * r / (4.0 * at)) *
                                          uk[static_cast<std::size_t>(active[a])][static_cast<std::size_t>(j)];
    }

  auto check_resolution = [&](double s) {
    const double omega = R0 / (2.0 * at) + s;
    if (u0.grid.max_spacing * omega > kPi / 8.0)
      throw Error(ErrorKind::ResolutionError, "input grid under-resolves e^{ir^2/4t} at t = " + std::to_string(t) + ": " +
                                                  suggestion(R0, 1.5 * omega));
  };
  check_resolution(R0 / (2.0 * at));

  RadialGrid sgrid;  // in s = r / 2|t|, weights for s ds
  std::vector<std::vector<cplx>> I(active.size());
  auto eval_nodes = [&](std::size_t from) {
    double panel_max = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double nu = ks.nu[static_cast<std::size_t>(active[a])];
      I[a].resize(sgrid.r.size());
      for (std::size_t i = from; i < sgrid.r.size(); ++i) {
        cplx s(0.0);
        for (int j = 0; j < N_in; ++j) s += bessel_j(nu, sgrid.r[i] * u0.grid.r[static_cast<std::size_t>(j)]) * g[a][static_cast<std::size_t>(j)];
        I[a][i] = s;
        panel_max = std::max(panel_max, std::abs(s));
      }
    }
    return panel_max;
  };

  if (opts.output) {
    for (int i = 0; i < opts.output->size(); ++i) {
      sgrid.r.push_back(opts.output->r[static_cast<std::size_t>(i)] / (2.0 * at));
      sgrid.w.push_back(opts.output->w[static_cast<std::size_t>(i)] / (4.0 * at * at));
    }
    if (!sgrid.r.empty()) check_resolution(*std::max_element(sgrid.r.begin(), sgrid.r.end()));
    eval_nodes(0);
  } else if (!active.empty()) {
    const double width = kTwoPi / R0;
    const double chirp_edge = R0 / (2.0 * at);
    double peak = 0.0;
    int quiet = 0;
    for (int p = 0; p < 200000; ++p) {
      const double a = p * width, b = (p + 1) * width;
      check_resolution(b);
      const std::size_t from = sgrid.r.size();
      append_panel(sgrid, a, b, 12);
      const double m = eval_nodes(from);
      peak = std::max(peak, m);
      quiet = m <= 1e-11 * peak ? quiet + 1 : 0;
      if (b >= chirp_edge && quiet >= 2) break;
    }
  }
  res.s_max = sgrid.r.empty() ? 0.0 : *std::max_element(sgrid.r.begin(), sgrid.r.end());

  // Assemble the field on r = 2|t| s.
  auto& F = res.field;
  F.grid.r.resize(sgrid.r.size());
  F.grid.w.resize(sgrid.r.size());
  for (std::size_t i = 0; i < sgrid.r.size(); ++i) {
    F.grid.r[i] = 2.0 * at * sgrid.r[i];
    F.grid.w[i] = 4.0 * at * at * sgrid.w[i];
  }
  F.grid.r_max = F.grid.r.empty() ? 0.0 : F.grid.r.back();
  F.grid.max_spacing = opts.output ? opts.output->max_spacing : 2.0 * at * sgrid.max_spacing;
  F.values.assign(sgrid.r.size() * static_cast<std::size_t>(n_out), cplx(0.0));
  double l2 = 0.0;
  for (std::size_t a = 0; a < active.size(); ++a) {
    const int k = active[a];
    const auto psi = ks.psi[static_cast<std::size_t>(k)].sample(n_out);
    const cplx ip = std::polar(1.0, -sg * 0.5 * kPi * ks.nu[static_cast<std::size_t>(k)]);
    for (std::size_t i = 0; i < sgrid.r.size(); ++i) {
      l2 += std::norm(I[a][i]) * sgrid.w[i];
      const double r = F.grid.r[i];
      const cplx pref = std::polar(1.0, sg * r * r / (4.0 * at)) / cplx(0.0, 2.0 * t);
      const cplx c = pref * ip * I[a][i];
      for (int m = 0; m < n_out; ++m) F.values[i * static_cast<std::size_t>(n_out) + static_cast<std::size_t>(m)] += c * psi[static_cast<std::size_t>(m)];
    }
  }
  F.update_norms();
  res.l2_norm = std::sqrt(l2);
  res.sup_norm = F.sup_norm();
  res.decay_functional = u0.l1_norm > 0.0 ? at * res.sup_norm / u0.l1_norm : 0.0;
  return res;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw Error(ErrorKind::InvalidInput, "bad log-spaced range");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return t;
}

DecayProfile decay_profile(const KernelSpec& ks, const WavePacket& u0, const std::vector<double>& t_list) {
  DecayProfile prof;
  std::vector<double> f;
  for (double t : t_list) {
    const auto r = evolve(ks, u0, t);
    DecayRow row{t, r.sup_norm, r.decay_functional, u0.l2_norm > 0.0 ? r.l2_norm / u0.l2_norm : 1.0};
    prof.rows.push_back(row);
    f.push_back(row.decay_functional);
    prof.max_functional = std::max(prof.max_functional, row.decay_functional);
    prof.max_l2_defect = std::max(prof.max_l2_defect, std::abs(row.l2_ratio - 1.0));
  }
  if (!f.empty()) {
    std::sort(f.begin(), f.end());
    const std::size_t n = f.size();
    prof.median_functional = n % 2 ? f[n / 2] : 0.5 * (f[n / 2 - 1] + f[n / 2]);
  }
  return prof;
}

namespace {

// Thomas algorithm for a complex tridiagonal system; overwrites rhs.
void thomas(const std::vector<cplx>& lo, const std::vector<cplx>& di, const std::vector<cplx>& up, std::vector<cplx>& rhs,
            std::vector<cplx>& work) {
  const std::size_t n = di.size();
  work.resize(n);
  cplx beta = di[0];
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    work[i] = up[i - 1] / beta;
    beta = di[i] - lo[i] * work[i];
    rhs[i] = (rhs[i] - lo[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= work[i + 1] * rhs[i + 1];
}

}  // namespace

CnResult crank_nicolson_oracle(const KernelSpec& ks, const InitialData& u0, int n_theta, double t, const CnParams& prm) {
  if (!(prm.R > 0.0) || !(prm.h > 0.0) || !(prm.dt > 0.0) || prm.h > prm.R / 100.0)
    throw Error(ErrorKind::InvalidInput, "Crank-Nicolson needs R > 0, 0 < h <= R/100, dt > 0");
  if (t == 0.0 || !std::isfinite(t)) throw Error(ErrorKind::InvalidInput, "t must be finite and non-zero");
  const int N = static_cast<int>(std::lround(prm.R / prm.h));
  const double h = prm.R / N;
  RadialGrid grid;
  for (int i = 1; i <= N; ++i) {
    grid.r.push_back((i - 0.5) * h);
    grid.w.push_back(h * (i - 0.5) * h);
  }
  grid.r_max = prm.R;
  grid.max_spacing = h;
  const auto init = WavePacket::sample(grid, n_theta, u0);
  const auto uk = project(ks, init, 1e-10);

  CnResult out;
  out.steps = static_cast<int>(std::ceil(std::abs(t) / prm.dt - 1e-9));
  const double dt = t / out.steps;
  out.field.grid = grid;
  out.field.n_theta = n_theta;
  out.field.values.assign(static_cast<std::size_t>(N * n_theta), cplx(0.0));

  std::vector<cplx> lo(static_cast<std::size_t>(N)), di(lo.size()), up(lo.size()), rhs(lo.size()), work;
  std::vector<double> Ld(lo.size()), Ll(lo.size()), Lu(lo.size());
  const cplx half(0.0, 0.5 * dt);
  double outer = 0.0, total = 0.0;
  for (int k = 0; k < ks.size(); ++k) {
    auto v = uk[static_cast<std::size_t>(k)];
    if (radial_norm(v, grid) <= 1e-14 * init.l2_norm) continue;
    const double mu = ks.nu[static_cast<std::size_t>(k)] * ks.nu[static_cast<std::size_t>(k)];
    for (int i = 0; i < N; ++i) {
      const double r = grid.r[static_cast<std::size_t>(i)];
      const double rm = i * h, rp = (i + 1) * h;
      Ll[static_cast<std::size_t>(i)] = -rm / (r * h * h);
      Lu[static_cast<std::size_t>(i)] = -rp / (r * h * h);
      Ld[static_cast<std::size_t>(i)] = (rm + rp) / (r * h * h) + mu / (r * r);
    }
    Ld[static_cast<std::size_t>(N - 1)] += (N * h) / (grid.r.back() * h * h);  // ghost value -v_N
    for (int i = 0; i < N; ++i) {
      const auto q = static_cast<std::size_t>(i);
      lo[q] = half * Ll[q];
      up[q] = half * Lu[q];
      di[q] = 1.0 + half * Ld[q];
    }
    for (int step = 0; step < out.steps; ++step) {
      for (int i = 0; i < N; ++i) {
        const auto q = static_cast<std::size_t>(i);
        cplx Lv = Ld[q] * v[q];
        if (i > 0) Lv += Ll[q] * v[q - 1];
        if (i + 1 < N) Lv += Lu[q] * v[q + 1];
        rhs[q] = v[q] - half * Lv;
      }
      thomas(lo, di, up, rhs, work);
      v.swap(rhs);
    }
    const auto psi = ks.psi[static_cast<std::size_t>(k)].sample(n_theta);
    for (int i = 0; i < N; ++i) {
      const auto q = static_cast<std::size_t>(i);
      const double m2 = std::norm(v[q]) * grid.w[q];
      total += m2;
      if (grid.r[q] > 0.9 * prm.R) outer += m2;
      for (int m = 0; m < n_theta; ++m) out.field.values[q * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(m)] += v[q] * psi[static_cast<std::size_t>(m)];
    }
  }
  out.field.update_norms();
  out.boundary_mass = total > 0.0 ? outer / total : 0.0;
  if (out.boundary_mass > 1e-8) throw Error(ErrorKind::ResolutionError, "packet reaches the Dirichlet boundary; enlarge R");
  return out;
}

double relative_l2(const WavePacket& a, const WavePacket& b) {
  if (a.values.size() != b.values.size() || a.n_theta != b.n_theta || a.grid.size() != b.grid.size())
    throw Error(ErrorKind::InvalidInput, "fields live on different grids");
  double num = 0.0, den = 0.0;
  for (int i = 0; i < a.grid.size(); ++i)
    for (int m = 0; m < a.n_theta; ++m) {
      num += std::norm(a.at(i, m) - b.at(i, m)) * b.grid.w[static_cast<std::size_t>(i)];
      den += std::norm(b.at(i, m)) * b.grid.w[static_cast<std::size_t>(i)];
    }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace magprop
