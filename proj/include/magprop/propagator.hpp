#pragma once

#include <functional>
#include <vector>

#include "magprop/fourier.hpp"
#include "magprop/kernel.hpp"

namespace magprop {

/// Radial nodes with weights for integrals  int f(r) r dr.
struct RadialGrid {
  std::vector<double> r;
  std::vector<double> w;
  double r_max = 0.0;
  double max_spacing = 0.0;  ///< widest panel divided by its node count

  int size() const { return static_cast<int>(r.size()); }
};

/// Gauss-Legendre panels of the given width on [0, r_max]; the first panel is
/// split geometrically towards the origin, where integrands behave like r^(2 nu + 1).
RadialGrid gauss_panels(double r_max, double panel_width, int nodes = 12);

using InitialData = std::function<cplx(double r, double theta)>;

/// Samples u(r_i, theta_m) on a radial grid times a uniform angular grid.
struct WavePacket {
  RadialGrid grid;
  int n_theta = 0;
  std::vector<cplx> values;  ///< values[i * n_theta + m]
  double l1_norm = 0.0;
  double l2_norm = 0.0;

  static WavePacket sample(const RadialGrid& grid, int n_theta, const InitialData& f);
  cplx at(int i, int m) const { return values[static_cast<std::size_t>(i * n_theta + m)]; }
  double sup_norm() const;
  void update_norms();
};

/// exp(-(r - r0)^2 / (2 width^2)), angularly constant.
InitialData gaussian_ring(double r0, double width);
/// r^nu exp(-r^2 / (2 sigma^2)) psi(theta).
InitialData single_mode_packet(const FourierSeries& psi, double nu, double sigma);
/// Radius beyond which the ring is below 1e-16.
double ring_support(double r0, double width);

struct EvolveOptions {
  int n_theta_out = 0;               ///< 0: same as the input
  const RadialGrid* output = nullptr;  ///< evaluate at these radii instead of the adaptive grid
  double mode_cutoff = 1e-14;        ///< skip modes with ||u_k|| below this fraction of ||u0||
  double bandwidth_tol = 1e-10;      ///< allowed relative mass outside the eigenbasis
};

struct EvolutionResult {
  double t = 0.0;
  WavePacket field;
  double sup_norm = 0.0;
  double decay_functional = 0.0;  ///< |t| sup|u(t)| / ||u0||_1
  double l2_norm = 0.0;           ///< from the mode-wise radial integrals
  int modes_used = 0;
  double s_max = 0.0;             ///< largest frequency r/(2|t|) evaluated
};

/// Representation-formula evolution
///   u(r, theta, t) = e^{i r^2/4t}/(2 i t) sum_k i^{-nu_k} psi_k(theta) int J_{nu_k}(r r'/2t) e^{i r'^2/4t} u_k(r') r' dr'.
/// Negative t uses the same formula with every phase conjugated.
EvolutionResult evolve(const KernelSpec& ks, const WavePacket& u0, double t, const EvolveOptions& opts = {});

struct DecayRow {
  double t = 0.0;
  double sup_norm = 0.0;
  double decay_functional = 0.0;
  double l2_ratio = 0.0;  ///< ||u(t)||_2 / ||u0||_2
};

struct DecayProfile {
  std::vector<DecayRow> rows;
  double max_functional = 0.0;  ///< empirical constant C for this u0
  double median_functional = 0.0;
  double max_l2_defect = 0.0;
};

DecayProfile decay_profile(const KernelSpec& ks, const WavePacket& u0, const std::vector<double>& t_list);
std::vector<double> log_spaced(double lo, double hi, int count);

struct CnParams {
  double R = 12.0;
  double h = 0.004;
  double dt = 2.5e-4;
};

struct CnResult {
  WavePacket field;            ///< on the cell-centred grid r_i = (i - 1/2) h
  double boundary_mass = 0.0;  ///< relative mass in the outer 10% of the disk
  int steps = 0;
};

/// Crank-Nicolson on the disk of radius R with Dirichlet data at R. Angular
/// dependence goes through the eigenpairs in ks; each mode solves
///   i v_t = -(1/r)(r v_r)_r + mu_k v / r^2
/// with second-order differences in r.
CnResult crank_nicolson_oracle(const KernelSpec& ks, const InitialData& u0, int n_theta, double t, const CnParams& prm);

/// Relative L^2 distance of two fields sampled on the same grid.
double relative_l2(const WavePacket& a, const WavePacket& b);

}  // namespace magprop
