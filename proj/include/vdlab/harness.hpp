#pragma once

#include <string>
#include <vector>

#include "vdlab/green.hpp"
#include "vdlab/initial_data.hpp"
#include "vdlab/solver.hpp"

namespace vdlab::harness {

enum class Kind { linear_quadrature, linear_lattice, nonlinear };

/// "linear-quadrature", "linear-lattice", "nonlinear"; InputError otherwise.
Kind parse_kind(const std::string& name);
std::string kind_name(Kind kind);

struct InitialSpec {
  data::Family family = data::Family::gaussian;
  double amplitude = 1.0;
};

/// One decay experiment.
///   linear-quadrature: |G(t) U0|_{L^2(R^dim)} by radial quadrature.
///   linear-lattice:    apply_semigroup on `lattice`, box L^2 norm of (c, u).
///   nonlinear:         simulate with `physics`/`solver`, timeseries of
///                      norms, constraint residuals and decay functionals
///                      (times come from the snapshot stride).
struct DecayExperiment {
  std::string name = "experiment";
  Kind kind = Kind::linear_quadrature;
  green::GreenParams green;
  int dim = 3;
  green::RadialOptions radial;
  Lattice lattice{3, 32, 2.0 * kPi * 64.0};
  visco::PhysicalParams physics;
  visco::SolverConfig solver;
  int threshold = 0;
  InitialSpec initial;
  std::vector<double> times;
  double fit_lo = 1e2;
  double fit_hi = 1e4;

  /// Linear kinds: times positive and increasing, fit window inside the
  /// time range with at least 8 samples.  InputError otherwise.
  void validate() const;
};

struct DecayTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a column; InputError when absent.
  std::size_t column(const std::string& name) const;
};

/// Linear kinds produce columns (t, value); nonlinear produces the
/// timeseries columns.  Engine errors propagate (BlowUpError included).
DecayTable run_experiment(const DecayExperiment& experiment);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of log(value) on log(1 + t) over rows with
/// t_lo <= t <= t_hi.  InputError for a nonpositive value in the window
/// (naming its row) or fewer than 8 rows.
FitResult fit_slope(const DecayTable& table, const std::string& column, double t_lo, double t_hi);

/// count log-spaced points from lo to hi inclusive.
std::vector<double> log_times(double lo, double hi, int count);

}  // namespace vdlab::harness
