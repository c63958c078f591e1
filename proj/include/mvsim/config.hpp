/// @file config.hpp
/// @brief Run configuration in flat `key = value` text.
///
/// One assignment per line, `#` starts a comment. Unknown or repeated keys
/// are rejected with ConfigError. Keys:
///
///   lx ly nx ny                      domain and grid
///   eps f_diffusion dt t_end cfl_safety poisson_tol helmholtz_tol
///   hyperviscosity cutoff_k viscosity semi_implicit couple_u
///   m_advection f_advection u_advection (upwind|central)
///   solver (spectral|cg)  magnetic_force (consistent|stress)
///   scenario                         e.g. `vortex+bubble`
///   u_amplitude f_init (identity|curl|zero) f_amplitude mollify_delta
///   offsphere_amplitude m_noise seed
///   hext (none|uniform|gradient) hext_amplitude
///   out_dir csv_path csv_stride snapshot_stride threads

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mvsim/fields.hpp"

namespace mvsim {

struct RunConfig {
  double lx = 1.0;
  double ly = 1.0;
  int nx = 32;
  int ny = 32;
  SimParams params;

  std::string scenario = "vortex";
  double u_amplitude = 1.0;
  std::string f_init = "identity";
  double f_amplitude = 0.1;
  double mollify_delta = 0.0;  ///< 0 disables mollification
  double offsphere_amplitude = 1.25;
  double m_noise = 0.0;
  std::uint64_t seed = 1;

  std::string hext = "none";
  double hext_amplitude = 0.0;

  std::string out_dir = ".";
  std::string csv_path = "diagnostics.csv";
  int csv_stride = 1;
  int snapshot_stride = 0;  ///< 0 writes no snapshots
  int threads = 1;

  /// Throws ConfigError (or ParameterError from SimParams) on invalid values.
  void validate() const;
  Grid grid() const { return Grid::make(lx, ly, nx, ny); }
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

/// Thread count: MVSIM_THREADS when set (must be a positive integer), else c.threads.
int effective_threads(const RunConfig& c);

}  // namespace mvsim
