#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vdlab/harness.hpp"

namespace vdlab::config {

/// Run configuration in sectioned key = value form:
///
///   ; comment (lines starting with '#' are comments too)
///   [lattice]      dim, points, period
///   [physics]      mu, lambda, gamma
///   [solver]       enabled, dt, t_end, snapshot_stride, dealias, cfl, scheme
///   [partition]    threshold
///   [initial]      family, amplitude
///   [experiment.NAME]
///                  kind, alpha, beta, kappa, dim, family, amplitude,
///                  t_min, t_max, points, fit_lo, fit_hi, r_cut, rel_tol
///
/// Every key is optional and defaults as in RunConfig.  Unknown sections,
/// unknown keys and values that do not parse as the key's type are
/// rejected with InputError.  Experiments take their lattice, physics,
/// solver and threshold from the global sections; family and amplitude
/// default to [initial].  `[solver] enabled = false` skips the main
/// simulation so a config can hold experiments only.
struct RunConfig {
  Lattice lattice{3, 32, 2.0 * kPi * 64.0};
  visco::PhysicalParams physics;
  visco::SolverConfig solver;
  bool simulate = true;
  int threshold = 0;
  harness::InitialSpec initial{data::Family::gaussian, 1e-3};
  std::vector<harness::DecayExperiment> experiments;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Every key written out explicitly (reals with 17 significant digits);
/// parse_config(to_ini(c)) reproduces c.
std::string to_ini(const RunConfig& config);

}  // namespace vdlab::config
