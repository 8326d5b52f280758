#include "vdlab/config.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "vdlab/io.hpp"

namespace vdlab::config {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& section_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"lattice", {"dim", "points", "period"}},
      {"physics", {"mu", "lambda", "gamma"}},
      {"solver", {"enabled", "dt", "t_end", "snapshot_stride", "dealias", "cfl", "scheme"}},
      {"partition", {"threshold"}},
      {"initial", {"family", "amplitude"}},
      {"experiment", {"kind", "alpha", "beta", "kappa", "dim", "family", "amplitude", "t_min", "t_max", "points",
                      "fit_lo", "fit_hi", "r_cut", "rel_tol"}},
  };
  return keys;
}

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double to_real(const std::string& section, const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError(where(section, key) + ": '" + text + "' is not a real number");
  return v;
}

int to_int(const std::string& section, const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError(where(section, key) + ": '" + text + "' is not an integer");
  return v;
}

bool to_bool(const std::string& section, const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw InputError(where(section, key) + ": '" + text + "' is not true or false");
}

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Reads one section, rejecting unknown keys.
class Section {
 public:
  Section(std::string name, const std::string& kind, const pt::ptree& tree) : name_(std::move(name)) {
    const auto& allowed = section_keys().at(kind);
    for (const auto& [key, value] : tree) {
      if (!allowed.count(key)) throw InputError("unknown key '" + key + "' in section [" + name_ + "]");
      values_[key] = value.get_value<std::string>();
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void real(const std::string& key, double& out) const {
    if (has(key)) out = to_real(name_, key, values_.at(key));
  }
  void integer(const std::string& key, int& out) const {
    if (has(key)) out = to_int(name_, key, values_.at(key));
  }
  void boolean(const std::string& key, bool& out) const {
    if (has(key)) out = to_bool(name_, key, values_.at(key));
  }
  void text(const std::string& key, std::string& out) const {
    if (has(key)) out = values_.at(key);
  }

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

}  // namespace

RunConfig parse_config(const std::string& raw) {
  // '#' comment lines are accepted alongside the ';' comments of the parser.
  std::string text;
  std::istringstream lines(raw);
  for (std::string line; std::getline(lines, line);) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') line[first] = ';';
    text += line + "\n";
  }

  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError("config line " + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig c;
  int dim = c.lattice.dim(), points = c.lattice.points();
  double period = c.lattice.period();
  std::vector<std::pair<std::string, const pt::ptree*>> experiment_sections;

  for (const auto& [name, body] : tree) {
    if (!body.data().empty()) throw InputError("key '" + name + "' appears outside any section");
    if (name.rfind("experiment.", 0) == 0) {
      if (name.size() == 11) throw InputError("experiment section needs a name: [experiment.NAME]");
      experiment_sections.emplace_back(name.substr(11), &body);
      continue;
    }
    if (!section_keys().count(name) || name == "experiment") throw InputError("unknown section [" + name + "]");
    const Section s(name, name, body);
    if (name == "lattice") {
      s.integer("dim", dim);
      s.integer("points", points);
      s.real("period", period);
    } else if (name == "physics") {
      s.real("mu", c.physics.mu);
      s.real("lambda", c.physics.lambda);
      s.real("gamma", c.physics.gamma);
    } else if (name == "solver") {
      s.boolean("enabled", c.simulate);
      s.real("dt", c.solver.dt);
      s.real("t_end", c.solver.t_end);
      s.integer("snapshot_stride", c.solver.snapshot_stride);
      s.boolean("dealias", c.solver.dealias);
      s.real("cfl", c.solver.cfl);
      std::string scheme = "integrating-factor-rk2";
      s.text("scheme", scheme);
      if (scheme != "integrating-factor-rk2") {
        throw InputError("[solver] scheme: '" + scheme + "' is not supported (integrating-factor-rk2)");
      }
    } else if (name == "partition") {
      s.integer("threshold", c.threshold);
    } else if (name == "initial") {
      std::string family = data::family_name(c.initial.family);
      s.text("family", family);
      c.initial.family = data::parse_family(family);
      s.real("amplitude", c.initial.amplitude);
    }
  }

  if (dim != 2 && dim != 3) throw InputError("[lattice] dim: must be 2 or 3");
  if (!(period > 0.0)) throw InputError("[lattice] period: must be positive");
  c.lattice = Lattice(dim, points, period);
  c.solver.lattice = c.lattice;
  c.physics.validate();
  if (!(c.solver.dt > 0.0) || !(c.solver.t_end > 0.0)) throw InputError("[solver] dt and t_end must be positive");
  if (c.solver.snapshot_stride < 1) throw InputError("[solver] snapshot_stride must be at least 1");
  if (!(c.solver.cfl > 0.0)) throw InputError("[solver] cfl must be positive");
  if (!(c.initial.amplitude >= 0.0)) throw InputError("[initial] amplitude must be nonnegative");

  for (const auto& [ename, body] : experiment_sections) {
    const std::string section = "experiment." + ename;
    const Section s(section, "experiment", *body);
    harness::DecayExperiment e;
    e.name = ename;
    std::string kind = harness::kind_name(e.kind);
    s.text("kind", kind);
    e.kind = harness::parse_kind(kind);
    s.real("alpha", e.green.alpha);
    s.real("beta", e.green.beta);
    s.real("kappa", e.green.kappa);
    s.integer("dim", e.dim);
    e.initial = c.initial;
    std::string family = data::family_name(e.initial.family);
    s.text("family", family);
    e.initial.family = data::parse_family(family);
    s.real("amplitude", e.initial.amplitude);
    double t_min = 1.0, t_max = 1e4;
    int count = 41;
    s.real("t_min", t_min);
    s.real("t_max", t_max);
    s.integer("points", count);
    s.real("fit_lo", e.fit_lo);
    s.real("fit_hi", e.fit_hi);
    s.real("r_cut", e.radial.r_cut);
    s.real("rel_tol", e.radial.rel_tol);
    e.lattice = c.lattice;
    e.physics = c.physics;
    e.solver = c.solver;
    e.threshold = c.threshold;
    if (e.kind != harness::Kind::nonlinear) {
      try {
        e.times = harness::log_times(t_min, t_max, count);
      } catch (const InputError& err) {
        throw InputError("[" + section + "] " + err.what());
      }
    }
    try {
      e.validate();
    } catch (const InputError& err) {
      throw InputError("[" + section + "] " + err.what());
    }
    c.experiments.push_back(std::move(e));
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string to_ini(const RunConfig& c) {
  std::ostringstream o;
  o << "[lattice]\n"
    << "dim = " << c.lattice.dim() << "\n"
    << "points = " << c.lattice.points() << "\n"
    << "period = " << real(c.lattice.period()) << "\n\n"
    << "[physics]\n"
    << "mu = " << real(c.physics.mu) << "\n"
    << "lambda = " << real(c.physics.lambda) << "\n"
    << "gamma = " << real(c.physics.gamma) << "\n\n"
    << "[solver]\n"
    << "enabled = " << (c.simulate ? "true" : "false") << "\n"
    << "dt = " << real(c.solver.dt) << "\n"
    << "t_end = " << real(c.solver.t_end) << "\n"
    << "snapshot_stride = " << c.solver.snapshot_stride << "\n"
    << "dealias = " << (c.solver.dealias ? "true" : "false") << "\n"
    << "cfl = " << real(c.solver.cfl) << "\n"
    << "scheme = integrating-factor-rk2\n\n"
    << "[partition]\n"
    << "threshold = " << c.threshold << "\n\n"
    << "[initial]\n"
    << "family = " << data::family_name(c.initial.family) << "\n"
    << "amplitude = " << real(c.initial.amplitude) << "\n";
  for (const auto& e : c.experiments) {
    o << "\n[experiment." << e.name << "]\n"
      << "kind = " << harness::kind_name(e.kind) << "\n"
      << "alpha = " << real(e.green.alpha) << "\n"
      << "beta = " << real(e.green.beta) << "\n"
      << "kappa = " << real(e.green.kappa) << "\n"
      << "dim = " << e.dim << "\n"
      << "family = " << data::family_name(e.initial.family) << "\n"
      << "amplitude = " << real(e.initial.amplitude) << "\n";
    if (!e.times.empty()) {
      o << "t_min = " << real(e.times.front()) << "\n"
        << "t_max = " << real(e.times.back()) << "\n"
        << "points = " << e.times.size() << "\n";
    }
    o << "fit_lo = " << real(e.fit_lo) << "\n"
      << "fit_hi = " << real(e.fit_hi) << "\n"
      << "r_cut = " << real(e.radial.r_cut) << "\n"
      << "rel_tol = " << real(e.radial.rel_tol) << "\n";
  }
  return o.str();
}

}  // namespace vdlab::config
