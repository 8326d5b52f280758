#include "vdlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdlab/functionals.hpp"

namespace vdlab::harness {

Kind parse_kind(const std::string& name) {
  if (name == "linear-quadrature") return Kind::linear_quadrature;
  if (name == "linear-lattice") return Kind::linear_lattice;
  if (name == "nonlinear") return Kind::nonlinear;
  throw InputError("unknown experiment kind '" + name + "' (expected linear-quadrature, linear-lattice or nonlinear)");
}

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::linear_quadrature:
      return "linear-quadrature";
    case Kind::linear_lattice:
      return "linear-lattice";
    case Kind::nonlinear:
      return "nonlinear";
  }
  return "?";
}

void DecayExperiment::validate() const {
  if (kind == Kind::nonlinear) {
    physics.validate();
    if (!(solver.dt > 0.0) || !(solver.t_end > 0.0)) throw InputError(name + ": dt and t_end must be positive");
    return;
  }
  green.validate();
  if (times.empty()) throw InputError(name + ": no output times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw InputError(name + ": times must be nonnegative and strictly increasing");
    }
  }
  if (!(fit_lo < fit_hi) || fit_lo < times.front() || fit_hi > times.back()) {
    throw InputError(name + ": fit window must lie inside the time range");
  }
  const auto inside = std::count_if(times.begin(), times.end(), [&](double t) { return t >= fit_lo && t <= fit_hi; });
  if (inside < 8) throw InputError(name + ": fewer than 8 times inside the fit window");
}

std::size_t DecayTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InputError("no column named '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

DecayTable run_experiment(const DecayExperiment& e) {
  e.validate();
  DecayTable table;
  switch (e.kind) {
    case Kind::linear_quadrature: {
      table.columns = {"t", "value"};
      const auto profile = data::radial_profile(e.initial.family, e.initial.amplitude, e.dim);
      for (double t : e.times) table.rows.push_back({t, green::radial_decay_quadrature(e.green, profile, e.dim, t, e.radial)});
      break;
    }
    case Kind::linear_lattice: {
      table.columns = {"t", "value"};
      const SpectralField u0 = data::lattice_field(e.initial.family, e.initial.amplitude, e.lattice);
      for (double t : e.times) {
        const auto [c, u] = green::apply_semigroup(e.green, u0, u0, t);
        table.rows.push_back({t, std::hypot(l2_norm(c), l2_norm(u))});
      }
      break;
    }
    case Kind::nonlinear: {
      table.columns = visco::timeseries_columns();
      const visco::State initial = data::nonlinear_state(e.initial.family, e.initial.amplitude, e.solver.lattice);
      visco::DecayTracker tracker(e.solver.lattice, e.threshold);
      const auto result = visco::simulate(e.solver, e.physics, initial, [&](long, double t, const visco::State& s) {
        const auto v = tracker.observe(t, s).values();
        table.rows.emplace_back(v.begin(), v.end());
      });
      if (result.blew_up) throw visco::BlowUpError(e.name + ": " + result.diagnostics);
      break;
    }
  }
  return table;
}

FitResult fit_slope(const DecayTable& table, const std::string& column, double t_lo, double t_hi) {
  if (!(t_lo <= t_hi)) throw InputError("fit window is empty");
  const std::size_t ti = table.column("t");
  const std::size_t vi = table.column(column);
  std::vector<double> x, y;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double t = table.rows[r][ti];
    if (!(t >= t_lo && t <= t_hi)) continue;
    const double v = table.rows[r][vi];
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "nonpositive value " << v << " in column '" << column << "' at row " << r << " (t = " << t << ")";
      throw InputError(msg.str());
    }
    x.push_back(std::log1p(t));
    y.push_back(std::log(v));
  }
  if (x.size() < 8) {
    throw InputError("fit window [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) + "] holds " +
                     std::to_string(x.size()) + " points; at least 8 are needed");
  }
  const double n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw InputError("fit window needs at least two distinct times");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = x.size();
  return fit;
}

std::vector<double> log_times(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InputError("log_times needs 0 < lo < hi and count >= 2");
  std::vector<double> t(count);
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < count; ++i) t[i] = lo * std::exp(ratio * i / (count - 1));
  t.front() = lo;
  t.back() = hi;
  return t;
}

}  // namespace vdlab::harness
