#include "vdlab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "vdlab/reformulation.hpp"

namespace vdlab::visco {

FunctionalValues instantaneous_functionals(const State& state, double t, const lp::DyadicPartition& partition,
                                           int threshold) {
  require_same_lattice(state.lattice(), partition.lattice(), "decay functionals");
  const double n = state.dim();
  const ReformulatedState r = reformulate(state);
  const lp::HybridSpec hybrid{n / 2.0 - 1.0, n / 2.0, threshold};
  const lp::BesovSpec hom{lp::Homogeneity::homogeneous, n / 2.0 - 1.0, 2.0, 1.0};
  auto inh = [](double s) { return lp::BesovSpec{lp::Homogeneity::inhomogeneous, s, 2.0, 1.0}; };
  const double w = std::pow(1.0 + t, n / 4.0);
  const double d_norm = lp::besov_norm(r.d, hom, partition);

  FunctionalValues f;
  f.M1 = w * (lp::hybrid_norm(r.a, hybrid, partition) + d_norm);
  f.M2 = w * (lp::hybrid_norm(r.Ecal, hybrid, partition) + d_norm);
  f.M3 = w * (lp::hybrid_norm(r.FtF, hybrid, partition) + lp::besov_norm(r.Omega, hom, partition));
  f.M4 = w * (l2_norm(state.a) + l2_norm(state.F) + l2_norm(state.v));
  f.M = w * (lp::besov_norm(state.a, inh(n / 2.0), partition) + lp::besov_norm(state.F, inh(n / 2.0), partition) +
             lp::besov_norm(state.v, inh(n / 2.0 - 1.0), partition));
  return f;
}

std::array<double, 14> TimeseriesRow::values() const {
  return {t,
          mass,
          l2_a,
          l2_v,
          l2_F,
          residuals.det,
          residuals.div,
          residuals.curl,
          residuals.div_u_over_det,
          functionals.M1,
          functionals.M2,
          functionals.M3,
          functionals.M4,
          functionals.M};
}

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> columns{"t",       "mass",    "l2_a",    "l2_v",
                                                "l2_F",    "res_det", "res_div", "res_curl",
                                                "res_divUoverDet", "M1", "M2", "M3", "M4", "M"};
  return columns;
}

DecayTracker::DecayTracker(const Lattice& lattice, int threshold)
    : partition_(lattice), threshold_(threshold), last_t_(0.0) {}

TimeseriesRow DecayTracker::observe(double t, const State& state) {
  if (!(t >= 0.0) || (!first_ && !(t > last_t_))) throw InputError("decay functionals need increasing times t >= 0");
  const FunctionalValues now = instantaneous_functionals(state, t, partition_, threshold_);
  sup_.M1 = std::max(sup_.M1, now.M1);
  sup_.M2 = std::max(sup_.M2, now.M2);
  sup_.M3 = std::max(sup_.M3, now.M3);
  sup_.M4 = std::max(sup_.M4, now.M4);
  sup_.M = std::max(sup_.M, now.M);
  first_ = false;
  last_t_ = t;

  TimeseriesRow row;
  row.t = t;
  row.mass = integral(state.a);
  row.l2_a = l2_norm(state.a);
  row.l2_v = l2_norm(state.v);
  row.l2_F = l2_norm(state.F);
  row.residuals = check_constraints(state);
  row.functionals = sup_;
  return row;
}

std::vector<TimeseriesRow> decay_functionals(std::span<const State> snapshots, std::span<const double> times,
                                             int threshold) {
  if (snapshots.empty()) throw InputError("decay functionals need at least one snapshot");
  if (snapshots.size() != times.size()) throw InputError("one time per snapshot is required");
  DecayTracker tracker(snapshots.front().lattice(), threshold);
  std::vector<TimeseriesRow> rows;
  for (std::size_t i = 0; i < snapshots.size(); ++i) rows.push_back(tracker.observe(times[i], snapshots[i]));
  return rows;
}

}  // namespace vdlab::visco
