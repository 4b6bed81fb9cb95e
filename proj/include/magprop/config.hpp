#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "magprop/kernel.hpp"
#include "magprop/potentials.hpp"
#include "magprop/propagator.hpp"

namespace magprop {

inline constexpr const char* kVersion = "1.0.0";

struct SpectrumSection {
  int truncation = 0;  ///< 0 picks default_truncation
  int j_min = 8, j_max = 48;
  int k_min = 10, k_max = 40;
};

struct WkbSection {
  int truncation = 0;
  int j_min = 8, j_max = 24;
  double tol = 1e-13;
};

struct KernelSection {
  int truncation = 0;
  double truncation_tol = 1e-10;
  ScanGrid grid;
  std::vector<int> ells{4, 8, 16};
  bool full_field = false;  ///< write every grid point, not just the per-rho argmax
};

struct PacketSection {
  std::string type = "gaussian_ring";  ///< or "single_mode"
  double r0 = 2.0, width = 0.3;        ///< gaussian_ring
  int index = 0;                       ///< single_mode: eigenpair index
  double sigma = 0.5;                  ///< single_mode
  int n_theta = 16;
  double panel_width = 0.0;            ///< 0: chosen from the smallest |t|
};

struct OracleSection {
  double t = 0.5;
  CnParams cn;
};

struct DecaySection {
  int truncation = 0;
  double truncation_tol = 1e-12;
  PacketSection packet;
  std::vector<double> t_list;
  std::optional<OracleSection> oracle;
  bool snapshots = false;  ///< write the field at every t as a binary snapshot
};

struct ExperimentConfig {
  AngularPotential potential;
  std::optional<SpectrumSection> spectrum;
  std::optional<WkbSection> wkb;
  std::optional<KernelSection> kernel;
  std::optional<DecaySection> decay;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  std::string canonical;     ///< sorted-key dump of the input document
  std::uint64_t hash = 0;    ///< FNV-1a of canonical
};

/// Throws Error(InvalidInput) on schema violations, including unknown keys.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

/// Potential from {"a_coeffs" | "a_samples", "A_coeffs" | "A_samples", "n_modes"}.
AngularPotential parse_potential(const nlohmann::json& j);

}  // namespace magprop
