#include "vdlab/cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "vdlab/config.hpp"
#include "vdlab/csv.hpp"
#include "vdlab/functionals.hpp"
#include "vdlab/io.hpp"
#include "vdlab/vdsf.hpp"

namespace vdlab::cli {
namespace {

namespace fs = std::filesystem;

std::string real12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

// ---- partition verify ----

struct PartitionArgs {
  int dim = 3;
  int points = 32;
  double period = 2.0 * kPi * 16.0;
};

int partition_verify(const PartitionArgs& a, std::ostream& out, std::ostream& err) {
  const Lattice lattice(a.dim, a.points, a.period);
  const auto dev = lp::partition_deviation(lp::build_partition(lattice));
  const double worst = std::max(dev.inhomogeneous, dev.homogeneous);
  out << "lattice dim=" << a.dim << " N=" << a.points << " L=" << real12(a.period) << "\n"
      << "inhomogeneous deviation " << real12(dev.inhomogeneous) << "\n"
      << "homogeneous deviation " << real12(dev.homogeneous) << "\n";
  if (worst < 1e-10) return kOk;
  err << "partition deviation " << real12(worst) << " >= 1e-10 at mode " << dev.worst_mode << " (|xi| = "
      << real12(dev.worst_radius) << ")\n";
  return kVerificationFailure;
}

// ---- besov ----

struct BesovArgs {
  std::string input;
  std::vector<std::string> fields;
  double s = 0.0;
  double p = 2.0;
  std::string r = "1";
  bool inhomogeneous = false;
  bool hybrid = false;
  double s_low = 0.0;
  double s_high = 0.0;
  int threshold = 0;
  double p_low = 2.0;
  double p_high = 2.0;
};

double parse_exponent(const std::string& text, const char* what) {
  if (text == "inf" || text == "infinity") return lp::kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 1.0)) throw InputError(std::string(what) + " must be >= 1 or 'inf'");
  return v;
}

int besov(const BesovArgs& a, std::ostream& out) {
  const Snapshot snap = read_vdsf(a.input);
  std::vector<SpectralField> fields;
  if (a.fields.empty()) {
    for (const auto& f : snap.fields) fields.push_back(dft_forward(f.values, snap.lattice));
  } else {
    for (const auto& name : a.fields) fields.push_back(dft_forward(snap.field(name), snap.lattice));
  }
  if (fields.empty()) throw InputError(a.input + ": snapshot holds no fields");
  lp::Components comps;
  for (const auto& f : fields) comps.push_back(&f);
  const lp::DyadicPartition partition(snap.lattice);
  double norm = 0.0;
  if (a.hybrid) {
    if (!(a.p_low >= 1.0) || !(a.p_high >= 1.0)) throw InputError("--p-low and --p-high must be >= 1");
    norm = lp::hybrid_norm(comps, lp::HybridSpec{a.s_low, a.s_high, a.threshold, a.p_low, a.p_high}, partition);
  } else {
    if (!(a.p >= 1.0)) throw InputError("--p must be >= 1");
    const lp::BesovSpec spec{a.inhomogeneous ? lp::Homogeneity::inhomogeneous : lp::Homogeneity::homogeneous, a.s,
                             a.p, parse_exponent(a.r, "--r")};
    norm = lp::besov_norm(comps, spec, partition);
  }
  out << real12(norm) << "\n";
  return kOk;
}

// ---- green ----

struct TimeArgs {
  std::vector<std::string> times;
  double t_min = 1.0;
  double t_max = 1e4;
  int points = 41;

  std::vector<double> resolve(bool explicit_list) const {
    if (!explicit_list) return harness::log_times(t_min, t_max, points);
    std::vector<double> t;
    for (const auto& text : times) {
      if (text.empty()) continue;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size()) throw InputError("--times: '" + text + "' is not a number");
      t.push_back(v);
    }
    if (t.empty()) throw InputError("--times is empty");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] >= 0.0) || (i && !(t[i] > t[i - 1])))
        throw InputError("--times must be nonnegative and strictly increasing");
    }
    return t;
  }
};

void emit_table(const harness::DecayTable& table, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << format_csv(table);
  } else {
    write_csv(path, table);
  }
}

struct GreenDecayArgs {
  green::GreenParams params;
  int dim = 3;
  std::string family = "gaussian";
  double amplitude = 1.0;
  TimeArgs times;
  double r_cut = 16.0;
  double rel_tol = 1e-9;
  std::string out;
};

int green_decay(const GreenDecayArgs& a, bool explicit_times, std::ostream& out) {
  a.params.validate();
  if (a.dim != 2 && a.dim != 3) throw InputError("--dim must be 2 or 3");
  if (!(a.r_cut > 0.0) || !(a.rel_tol > 0.0)) throw InputError("--r-cut and --rel-tol must be positive");
  harness::DecayExperiment e;
  e.name = "green decay";
  e.kind = harness::Kind::linear_quadrature;
  e.green = a.params;
  e.dim = a.dim;
  e.initial = {data::parse_family(a.family), a.amplitude};
  e.radial.r_cut = a.r_cut;
  e.radial.rel_tol = a.rel_tol;
  e.times = a.times.resolve(explicit_times);
  const auto profile = data::radial_profile(e.initial.family, e.initial.amplitude, e.dim);
  harness::DecayTable table{{"t", "value"}, {}};
  for (double t : e.times) table.rows.push_back({t, green::radial_decay_quadrature(e.green, profile, e.dim, t, e.radial)});
  emit_table(table, a.out, out);
  return kOk;
}

struct SumBoundArgs {
  double theta = 1.0;
  int R = 10;
  TimeArgs times{{}, 1e-2, 1e6, 41};
  std::string out;
};

int green_sumbound(const SumBoundArgs& a, bool explicit_times, std::ostream& out) {
  if (!(a.theta > 0.0) || !std::isfinite(a.theta)) throw InputError("--theta must be positive");
  const auto times = a.times.resolve(explicit_times);
  harness::DecayTable table{{"t", "value", "I", "II", "III"}, {}};
  for (const auto& row : green::sum_bound_scan(a.theta, a.R, times)) table.rows.push_back({row.t, row.S, row.I, row.II, row.III});
  emit_table(table, a.out, out);
  return kOk;
}

// ---- simulate ----

Snapshot to_snapshot(const visco::State& s) {
  Snapshot snap{s.lattice(), {}};
  const int d = s.dim();
  snap.fields.push_back({"a", dft_inverse(s.a)});
  for (int i = 0; i < d; ++i) snap.fields.push_back({"v_" + std::to_string(i), dft_inverse(s.v[i])});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      snap.fields.push_back({"F_" + std::to_string(i) + std::to_string(j), dft_inverse(s.F(i, j))});
  return snap;
}

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%08ld.vdsf", step);
  return buf;
}

struct Outcome {
  int code = kOk;
  std::string message;
};

Outcome run_main_simulation(const config::RunConfig& c, const fs::path& dir) {
  const visco::State initial = data::nonlinear_state(c.initial.family, c.initial.amplitude, c.lattice);
  visco::DecayTracker tracker(c.lattice, c.threshold);
  harness::DecayTable table{visco::timeseries_columns(), {}};
  fs::create_directories(dir / "snapshots");
  const auto result = visco::simulate(c.solver, c.physics, initial, [&](long step, double t, const visco::State& s) {
    const auto v = tracker.observe(t, s).values();
    table.rows.emplace_back(v.begin(), v.end());
    write_vdsf(dir / "snapshots" / snapshot_name(step), to_snapshot(s));
    // Rewritten after every observation so a blow-up leaves a usable file.
    write_csv(dir / "timeseries.csv", table);
  });
  std::ostringstream msg;
  msg << "simulation: " << result.steps << " steps, t = " << real12(result.t) << ", " << table.rows.size()
      << " snapshots";
  if (result.blew_up) return {kBlowUp, msg.str() + "; blow-up: " + result.diagnostics};
  return {kOk, msg.str()};
}

Outcome run_one_experiment(const harness::DecayExperiment& e, const fs::path& dir) {
  try {
    const auto table = harness::run_experiment(e);
    write_csv(dir / (e.name + ".csv"), table);
    return {kOk, "experiment " + e.name + ": " + std::to_string(table.rows.size()) + " rows"};
  } catch (const visco::BlowUpError& x) {
    return {kBlowUp, "experiment " + e.name + ": blow-up: " + x.what()};
  } catch (const InputError& x) {
    return {kInputError, "experiment " + e.name + ": " + x.what()};
  } catch (const std::exception& x) {
    return {kVerificationFailure, "experiment " + e.name + ": " + x.what()};
  }
}

int simulate(const std::string& config_path, const std::string& out_dir, int jobs, std::ostream& out,
             std::ostream& err) {
  if (jobs < 1) throw InputError("--jobs must be at least 1");
  const config::RunConfig c = config::load_config(config_path);
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + out_dir + ": " + ec.message());
  write_file_atomic(dir / "config.ini", config::to_ini(c));

  std::vector<Outcome> outcomes;
  if (c.simulate) outcomes.push_back(run_main_simulation(c, dir));

  // Experiments are independent: each owns its solver state and writes its
  // own file, so the outputs do not depend on the schedule.
  std::vector<Outcome> results(c.experiments.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < c.experiments.size(); i = next++) results[i] = run_one_experiment(c.experiments[i], dir);
  };
  const int workers = static_cast<int>(std::min<std::size_t>(jobs, c.experiments.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  if (workers > 0) worker();
  for (auto& t : pool) t.join();
  outcomes.insert(outcomes.end(), results.begin(), results.end());

  int code = kOk;
  for (const auto& o : outcomes) {
    (o.code == kOk ? out : err) << o.message << "\n";
    // Blow-up outranks input errors, which outrank other failures.
    if (o.code == kBlowUp || (o.code == kInputError && code != kBlowUp) || (o.code != kOk && code == kOk)) code = o.code;
  }
  return code;
}

// ---- decay fit ----

struct FitArgs {
  std::string input;
  std::string column = "value";
  double t_lo = 1e2;
  double t_hi = 1e4;
  std::string report;
};

int decay_fit(const FitArgs& a, std::ostream& out) {
  const auto table = read_csv(a.input);
  const auto fit = harness::fit_slope(table, a.column, a.t_lo, a.t_hi);
  nlohmann::ordered_json j;
  j["input"] = a.input;
  j["column"] = a.column;
  j["window"] = {fit.t_lo, fit.t_hi};
  j["points"] = fit.points;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  const std::string report = a.report.empty() ? a.input + ".fit.json" : a.report;
  write_file_atomic(report, j.dump(2) + "\n");
  out << "slope " << real12(fit.slope) << "\n"
      << "intercept " << real12(fit.intercept) << "\n"
      << "r_squared " << real12(fit.r_squared) << "\n"
      << "points " << fit.points << "\n";
  return kOk;
}

void add_times(CLI::App* cmd, TimeArgs& t) {
  cmd->add_option("--times", t.times, "explicit comma-separated output times")->delimiter(',');
  cmd->add_option("--t-min", t.t_min, "first of the log-spaced times")->capture_default_str();
  cmd->add_option("--t-max", t.t_max, "last of the log-spaced times")->capture_default_str();
  cmd->add_option("--points", t.points, "number of log-spaced times")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vdlab: decay laboratory for compressible viscoelastic flows"};
  app.require_subcommand(1);

  PartitionArgs part;
  auto* partition = app.add_subcommand("partition", "Littlewood-Paley partition tools");
  partition->require_subcommand(1);
  auto* verify = partition->add_subcommand("verify", "check chi + sum phi = 1 on a lattice");
  verify->add_option("--dim", part.dim, "2 or 3")->capture_default_str();
  verify->add_option("--points,-N", part.points, "points per axis (power of two, >= 8)")->capture_default_str();
  verify->add_option("--period,-L", part.period, "box period")->capture_default_str();

  BesovArgs bes;
  auto* besov_cmd = app.add_subcommand("besov", "Besov norm of a VDSF snapshot");
  besov_cmd->add_option("--input", bes.input, "VDSF file")->required();
  besov_cmd->add_option("--field", bes.fields, "field name (repeatable; default: all fields as one vector)");
  besov_cmd->add_option("--s", bes.s, "regularity")->capture_default_str();
  besov_cmd->add_option("--p", bes.p, "integrability")->capture_default_str();
  besov_cmd->add_option("--r", bes.r, "summability (number or inf)")->capture_default_str();
  besov_cmd->add_flag("--inhomogeneous", bes.inhomogeneous, "use the inhomogeneous decomposition");
  besov_cmd->add_flag("--hybrid", bes.hybrid, "two-regime norm (l^1 sum)");
  besov_cmd->add_option("--s-low", bes.s_low, "hybrid regularity up to the threshold")->capture_default_str();
  besov_cmd->add_option("--s-high", bes.s_high, "hybrid regularity above the threshold")->capture_default_str();
  besov_cmd->add_option("--threshold", bes.threshold, "hybrid threshold R0")->capture_default_str();
  besov_cmd->add_option("--p-low", bes.p_low, "hybrid low-frequency integrability")->capture_default_str();
  besov_cmd->add_option("--p-high", bes.p_high, "hybrid high-frequency integrability")->capture_default_str();

  auto* green_cmd = app.add_subcommand("green", "linear Green matrix tools");
  green_cmd->require_subcommand(1);
  GreenDecayArgs gd;
  auto* decay_cmd = green_cmd->add_subcommand("decay", "|G(t) U0|_{L^2} by radial quadrature");
  decay_cmd->add_option("--alpha", gd.params.alpha)->capture_default_str();
  decay_cmd->add_option("--beta", gd.params.beta)->capture_default_str();
  decay_cmd->add_option("--kappa", gd.params.kappa)->capture_default_str();
  decay_cmd->add_option("--dim", gd.dim, "2 or 3")->capture_default_str();
  decay_cmd->add_option("--family", gd.family, "gaussian, annulus or l1-bump")->capture_default_str();
  decay_cmd->add_option("--amplitude", gd.amplitude)->capture_default_str();
  decay_cmd->add_option("--r-cut", gd.r_cut, "radial cutoff")->capture_default_str();
  decay_cmd->add_option("--rel-tol", gd.rel_tol, "quadrature tolerance")->capture_default_str();
  decay_cmd->add_option("--out", gd.out, "CSV path (default: stdout)");
  add_times(decay_cmd, gd.times);

  SumBoundArgs sb;
  auto* sum_cmd = green_cmd->add_subcommand("sumbound", "dyadic sum bound S(t) with its I, II, III split");
  sum_cmd->add_option("--theta", sb.theta)->capture_default_str();
  sum_cmd->add_option("--R", sb.R, "largest block index")->capture_default_str();
  sum_cmd->add_option("--out", sb.out, "CSV path (default: stdout)");
  add_times(sum_cmd, sb.times);

  std::string config_path, out_dir;
  int jobs = 1;
  auto* sim = app.add_subcommand("simulate", "nonlinear run and decay experiments from a config file");
  sim->add_option("--config", config_path, "config file")->required();
  sim->add_option("--out", out_dir, "output directory")->required();
  sim->add_option("--jobs,-j", jobs, "experiments run concurrently")->capture_default_str();

  FitArgs fa;
  auto* decay = app.add_subcommand("decay", "decay curve analysis");
  decay->require_subcommand(1);
  auto* fit = decay->add_subcommand("fit", "least-squares slope of log(value) against log(1 + t)");
  fit->add_option("--input", fa.input, "CSV file with a t column")->required();
  fit->add_option("--column", fa.column)->capture_default_str();
  fit->add_option("--t-lo", fa.t_lo, "window start")->capture_default_str();
  fit->add_option("--t-hi", fa.t_hi, "window end")->capture_default_str();
  fit->add_option("--report", fa.report, "JSON report path (default: INPUT.fit.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Help requested on a subcommand arrives as CallForHelp too; all else is usage.
    err << "usage error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*verify) return partition_verify(part, out, err);
    if (*besov_cmd) return besov(bes, out);
    if (*decay_cmd) return green_decay(gd, decay_cmd->count("--times") > 0, out);
    if (*sum_cmd) return green_sumbound(sb, sum_cmd->count("--times") > 0, out);
    if (*sim) return simulate(config_path, out_dir, jobs, out, err);
    if (*fit) return decay_fit(fa, out);
  } catch (const visco::BlowUpError& e) {
    err << "blow-up: " << e.what() << "\n";
    return kBlowUp;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  err << "no command\n";
  return kInputError;
}

}  // namespace vdlab::cli
