#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "vdlab/littlewood_paley.hpp"
#include "vdlab/solver.hpp"

namespace vdlab::visco {

/// Decay functionals, each a running sup over the observed times tau <= t
/// with weight (1 + tau)^{n/4}:
///   M1: |a|_{B^{n/2-1, n/2}} + |d|_{Bdot^{n/2-1}}
///   M2: |Ecal|_{B^{n/2-1, n/2}} + |d|_{Bdot^{n/2-1}}
///   M3: |F^T - F|_{B^{n/2-1, n/2}} + |Omega|_{Bdot^{n/2-1}}
///   M4: |a|_{L^2} + |F|_{L^2} + |v|_{L^2}
///   M:  |a|_{B^{n/2}} + |F|_{B^{n/2}} + |v|_{B^{n/2-1}}
/// B^{s,t} is the hybrid norm (p = 2, l^1, low/high split at threshold R0),
/// Bdot^s the homogeneous and B^s the inhomogeneous B^s_{2,1} norm.
struct FunctionalValues {
  double M1 = 0.0;
  double M2 = 0.0;
  double M3 = 0.0;
  double M4 = 0.0;
  double M = 0.0;
};

/// The weighted quantities at one time, before the running sup.
FunctionalValues instantaneous_functionals(const State& state, double t, const lp::DyadicPartition& partition,
                                           int threshold);

/// One line of the simulation timeseries.  `mass` is the integral of a over
/// the box (the perturbation of the total mass).
struct TimeseriesRow {
  double t = 0.0;
  double mass = 0.0;
  double l2_a = 0.0;
  double l2_v = 0.0;
  double l2_F = 0.0;
  ConstraintReport residuals;
  FunctionalValues functionals;

  std::array<double, 14> values() const;
};

/// Header matching TimeseriesRow::values().
const std::vector<std::string>& timeseries_columns();

/// Running-sup bookkeeping for a sequence of snapshots with increasing t.
class DecayTracker {
 public:
  DecayTracker(const Lattice& lattice, int threshold = 0);

  /// InputError if t does not increase.
  TimeseriesRow observe(double t, const State& state);

 private:
  lp::DyadicPartition partition_;
  int threshold_;
  FunctionalValues sup_;
  double last_t_;
  bool first_ = true;
};

/// Table of running suprema for a snapshot series (>= 1 snapshot).
std::vector<TimeseriesRow> decay_functionals(std::span<const State> snapshots, std::span<const double> times,
                                             int threshold = 0);

}  // namespace vdlab::visco
