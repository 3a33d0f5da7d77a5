/// @file config.hpp
/// @brief Strict sectioned key = value run configuration.
///
/// Format: `[section]` headers, `key = value` lines, full-line comments
/// starting with '#' or ';'.  Unknown sections or keys, duplicate scalar
/// keys, and malformed values are rejected.  `rho_mode` / `u_mode` may be
/// repeated to accumulate initial perturbation modes.  Serialization is
/// canonical (fixed key order, 17 significant digits), so that
/// parse(serialize(c)) == c and the configuration hash is reproducible.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tns/common.hpp"
#include "tns/fixedpoint.hpp"
#include "tns/grid.hpp"

namespace tns {

/// One cosine perturbation mode  amp * cos(pi k . y + phase).
struct ModeSpec {
  int comp = 0;          ///< velocity component (u modes only)
  real amp = 0.0;
  std::vector<int> k;    ///< integer frequency per axis
  real phase = 0.0;

  bool operator==(const ModeSpec&) const = default;
};

struct Config {
  // [problem]
  int dim = 2;
  int n = 32;
  real T = 0.1;
  int nt = 17;
  real p = 2.0;
  real q = 4.0;
  real sigma = 0.5;
  real rho_ref = 1.0;

  // [model]
  std::string viscosity = "newtonian";
  std::vector<real> mu_params{1.0};
  std::vector<real> lam_params{1.0};
  std::string pressure = "power";
  std::vector<real> pressure_params{1.0, 2.0};

  // [initial]
  real epsilon = 1.0;
  std::vector<ModeSpec> rho_modes;
  std::vector<ModeSpec> u_modes;

  // [solver]
  real tol = 1e-8;
  int max_iter = 60;
  int max_halvings = 8;
  real richardson_tol = 1e-10;
  int richardson_max_iter = 200;
  int reference_substeps = 16;
  int npairs = 3;
  std::uint64_t seed = 1;

  // [output]
  std::string out_dir = "out";
  std::string prefix = "run";
  bool write_snapshots = true;
  bool write_csv = true;

  bool operator==(const Config&) const = default;
};

/// Parse configuration text; throws invalid_parameter with a line-numbered
/// message on any violation.
Config parse_config(const std::string& text);

/// Read and parse a configuration file.
Config load_config(const std::string& path);

/// Canonical text form (round-trips through parse_config).
std::string serialize_config(const Config& cfg);

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a(const std::string& bytes);

/// Grid described by the configuration.
Grid make_grid(const Config& cfg);

/// Assemble the full problem (models, initial fields, solver settings) on a
/// caller-owned grid.
Problem make_problem(const Config& cfg, const Grid& g);

}  // namespace tns
