#include <cmath>
#include <string>
#include <vector>

#include "../support.hpp"
#include "doctest.h"
#include "vdlab/config.hpp"
#include "vdlab/csv.hpp"
#include "vdlab/functionals.hpp"
#include "vdlab/harness.hpp"

using namespace vdlab;
using namespace vdlab::harness;

namespace {

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Radial transform of (1 - |x|^2)^6 on the unit ball, by Simpson.
double bump_transform_oracle(int dim, double r) {
  auto bump = [](double s) { return std::pow(1.0 - s * s, 6); };
  if (dim == 3) {
    auto f = [&](double s) { return bump(s) * s * s * (r * s == 0.0 ? 1.0 : std::sin(r * s) / (r * s)); };
    return 4.0 * kPi * std::pow(2.0 * kPi, -1.5) * simpson(f, 0.0, 1.0, 4000);
  }
  auto f = [&](double s) { return bump(s) * s * std::cyl_bessel_j(0.0, r * s); };
  return simpson(f, 0.0, 1.0, 4000);
}

visco::State scaled(const visco::State& s, double eps) {
  visco::State out = s;
  out.a *= eps;
  for (int i = 0; i < s.dim(); ++i) {
    out.v[i] *= eps;
    for (int j = 0; j < s.dim(); ++j) out.F(i, j) *= eps;
  }
  return out;
}

DecayTable power_law(double c, double rate, double t_lo, double t_hi, int n) {
  DecayTable t{{"t", "value"}, {}};
  for (double x : log_times(t_lo, t_hi, n)) t.rows.push_back({x, c * std::pow(1.0 + x, rate)});
  return t;
}

DecayExperiment quadrature_experiment(green::GreenParams p, data::Family family) {
  DecayExperiment e;
  e.kind = Kind::linear_quadrature;
  e.green = p;
  e.dim = 3;
  e.initial = {family, 1.0};
  e.times = log_times(1.0, 1e4, 41);
  return e;
}

const char* kFullConfig = R"(# full example
[lattice]
dim = 2
points = 16
period = 12.5

[physics]
mu = 0.75
lambda = 0.125
gamma = 1.5

[solver]
enabled = false
dt = 0.002
t_end = 0.5
snapshot_stride = 25
dealias = false
cfl = 0.25
scheme = integrating-factor-rk2

[partition]
threshold = 1

; semicolon comments work too
[initial]
family = annulus
amplitude = 0.003

[experiment.quad]
kind = linear-quadrature
alpha = 2
beta = 1
kappa = 1.5
dim = 3
family = l1-bump
t_min = 1
t_max = 1e4
points = 33
r_cut = 24
rel_tol = 1e-10

[experiment.run]
kind = nonlinear
)";

}  // namespace

TEST_SUITE("decay-harness") {
  TEST_CASE("initial-data families") {
    CHECK(data::parse_family("gaussian") == data::Family::gaussian);
    CHECK(data::parse_family("annulus") == data::Family::annulus);
    CHECK(data::parse_family("l1-bump") == data::Family::l1_bump);
    CHECK_THROWS_AS(data::parse_family("box"), InputError);
    for (auto f : {data::Family::gaussian, data::Family::annulus, data::Family::l1_bump})
      CHECK(data::parse_family(data::family_name(f)) == f);
    CHECK_THROWS_AS(data::radial_transform(data::Family::gaussian, 1.0, 4, 1.0), InputError);

    CHECK(data::radial_transform(data::Family::gaussian, 2.0, 3, 1.5) == doctest::Approx(2.0 * std::exp(-2.25)).epsilon(1e-15));
    CHECK(data::radial_transform(data::Family::annulus, 1.0, 3, 0.5) == 0.0);
    CHECK(data::radial_transform(data::Family::annulus, 1.0, 3, 2.0) == doctest::Approx(lp::phi(2.0)));

    // Closed forms at r = 0: int (1-s^2)^6 s^2 ds = 1024/45045, int (1-s^2)^6 s ds = 1/14.
    CHECK(data::radial_transform(data::Family::l1_bump, 1.0, 3, 0.0) ==
          doctest::Approx(4.0 * kPi * std::pow(2.0 * kPi, -1.5) * 1024.0 / 45045.0).epsilon(1e-14));
    CHECK(data::radial_transform(data::Family::l1_bump, 1.0, 2, 0.0) == doctest::Approx(1.0 / 14.0).epsilon(1e-14));
    for (int dim : {2, 3}) {
      for (double r : {0.3, 1.0, 2.7, 6.0, 11.0}) {
        CAPTURE(dim);
        CAPTURE(r);
        const double got = data::radial_transform(data::Family::l1_bump, 1.0, dim, r);
        CHECK(std::abs(got - bump_transform_oracle(dim, r)) < 1e-11);
      }
    }
    const auto prof = data::radial_profile(data::Family::gaussian, 3.0, 3);
    CHECK(prof(1.0)[0] == prof(1.0)[1]);
  }

  TEST_CASE("lattice sampling reproduces the whole-space L2 norm") {
    // Box L2 norm = Riemann sum of |U0_hat|^2 over the frequency lattice.
    const Lattice l(3, 32, 2.0 * kPi * 4.0);
    const auto f = data::lattice_field(data::Family::gaussian, 1.0, l);
    const double exact = std::sqrt(4.0 * kPi * std::sqrt(kPi / 2.0) / 8.0);  // int e^{-2 r^2} over R^3
    CHECK(l2_norm(f) == doctest::Approx(exact).epsilon(1e-6));
  }

  TEST_CASE("nonlinear initial state") {
    const Lattice l(3, 16, 2.0 * kPi);
    const auto s = data::nonlinear_state(data::Family::gaussian, 1e-3, l);
    double mx = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mx = std::max(mx, test::max_abs(dft_inverse(partial(s.v[i], j))));
    CHECK(mx == doctest::Approx(1e-3).epsilon(1e-12));
    const auto res = visco::check_constraints(s);
    CHECK(res.det < 1e-12);
    CHECK(res.curl < 1e-12);
    const auto zero = data::nonlinear_state(data::Family::gaussian, 0.0, l);
    CHECK(l2_norm(zero.a) + l2_norm(zero.v) + l2_norm(zero.F) == 0.0);
  }

  TEST_CASE("log times") {
    const auto t = log_times(1e-2, 1e6, 41);
    REQUIRE(t.size() == 41);
    CHECK(t.front() == 1e-2);
    CHECK(t.back() == 1e6);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] / t[i - 1] == doctest::Approx(std::pow(10.0, 0.2)));
    CHECK_THROWS_AS(log_times(0.0, 1.0, 5), InputError);
    CHECK_THROWS_AS(log_times(2.0, 1.0, 5), InputError);
    CHECK_THROWS_AS(log_times(1.0, 2.0, 1), InputError);
  }

  TEST_CASE("fit_slope on exact power laws") {
    for (double rate : {-0.75, -1.25, -0.5}) {
      const auto fit = fit_slope(power_law(3.0, rate, 1.0, 1e4, 41), "value", 1e2, 1e4);
      CHECK(std::abs(fit.slope - rate) < 1e-10);
      CHECK(std::abs(fit.intercept - std::log(3.0)) < 1e-9);
      CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(fit.points == 21);
      CHECK(fit.t_lo == 1e2);
      CHECK(fit.t_hi == 1e4);
    }
  }

  TEST_CASE("fit_slope is invariant under rescaling") {
    test::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      DecayTable t{{"t", "value"}, {}};
      for (double x : log_times(1.0, 1e4, 41)) t.rows.push_back({x, std::pow(1.0 + x, -0.75) * test::uniform(rng, 0.5, 2.0)});
      const double c = std::exp(test::uniform(rng, -20.0, 20.0));
      DecayTable scaled = t;
      for (auto& row : scaled.rows) row[1] *= c;
      const auto a = fit_slope(t, "value", 1e2, 1e4);
      const auto b = fit_slope(scaled, "value", 1e2, 1e4);
      CHECK(std::abs(a.slope - b.slope) < 1e-12);
      CHECK(b.intercept - a.intercept == doctest::Approx(std::log(c)).epsilon(1e-10));
      CHECK(a.r_squared >= 0.0);
      CHECK(a.r_squared <= 1.0);
    }
  }

  TEST_CASE("fit_slope rejects bad windows") {
    auto t = power_law(1.0, -0.75, 1.0, 1e4, 41);
    t.rows[30][1] = 0.0;
    try {
      fit_slope(t, "value", 1e2, 1e4);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("row 30") != std::string::npos);
    }
    t.rows[30][1] = -1.0;
    CHECK_THROWS_AS(fit_slope(t, "value", 1e2, 1e4), InputError);
    // Outside the window a nonpositive value is harmless.
    CHECK_NOTHROW(fit_slope(t, "value", 1.0, 1e2));
    CHECK_THROWS_AS(fit_slope(power_law(1.0, -0.75, 1.0, 1e4, 41), "value", 1e2, 2e2), InputError);
    CHECK_THROWS_AS(fit_slope(power_law(1.0, -0.75, 1.0, 1e4, 41), "missing", 1e2, 1e4), InputError);
    CHECK_THROWS_AS(fit_slope(power_law(1.0, -0.75, 1.0, 1e4, 41), "value", 1e4, 1e2), InputError);
  }

  TEST_CASE("exponential decay shows as a poor power-law fit") {
    DecayTable t{{"t", "value"}, {}};
    for (double x : log_times(1.0, 1e2, 30)) t.rows.push_back({x, std::exp(-0.1 * x)});
    const auto fit = fit_slope(t, "value", 1.0, 1e2);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared < 0.99);
  }

  TEST_CASE("experiment validation") {
    auto e = quadrature_experiment({1, 2, 1}, data::Family::gaussian);
    CHECK_NOTHROW(e.validate());
    auto bad = e;
    bad.fit_hi = 1e5;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = e;
    bad.times = log_times(1.0, 1e4, 9);
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = e;
    std::swap(bad.times[3], bad.times[4]);
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = e;
    bad.green.kappa = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
    CHECK(parse_kind(kind_name(Kind::linear_lattice)) == Kind::linear_lattice);
    CHECK_THROWS_AS(parse_kind("linear"), InputError);
  }

  TEST_CASE("linear quadrature decay: monotone, rate -3/4 for data bounded at the origin") {
    const green::GreenParams presets[] = {{1, 2, 1}, {2, 1, 1.5}, {1, 1, 1}, {1, 2, 0.5}, {2, 1, 3}};
    for (const auto& p : presets) {
      for (auto family : {data::Family::gaussian, data::Family::l1_bump}) {
        CAPTURE(p.alpha);
        CAPTURE(p.beta);
        CAPTURE(p.kappa);
        CAPTURE(data::family_name(family));
        const auto e = quadrature_experiment(p, family);
        const auto table = run_experiment(e);
        REQUIRE(table.rows.size() == e.times.size());
        for (std::size_t i = 1; i < table.rows.size(); ++i) CHECK(table.rows[i][1] < table.rows[i - 1][1]);
        const auto fit = fit_slope(table, "value", 1e2, 1e4);
        CHECK(fit.slope >= -0.80);
        CHECK(fit.slope <= -0.70);
      }
    }
  }

  TEST_CASE("doubling the quadrature cutoff is negligible") {
    for (auto family : {data::Family::gaussian, data::Family::l1_bump}) {
      auto e = quadrature_experiment({1, 2, 1}, family);
      e.times = log_times(1e-2, 1e4, 13);
      e.fit_lo = 1e-2;
      const auto base = run_experiment(e);
      e.radial.r_cut *= 2.0;
      const auto wide = run_experiment(e);
      for (std::size_t i = 0; i < base.rows.size(); ++i) {
        CAPTURE(base.rows[i][0]);
        CHECK(std::abs(wide.rows[i][1] - base.rows[i][1]) < 1e-6 * base.rows[i][1]);
      }
    }
  }

  TEST_CASE("lattice and quadrature agree in the torus validity window") {
    // t <= (L / 2 pi)^2 / 4 = 16 for L = 2 pi 8.
    auto q = quadrature_experiment({1, 2, 1}, data::Family::gaussian);
    q.times = log_times(1e-2, 16.0, 13);
    q.fit_lo = 1e-2;
    q.fit_hi = 16.0;
    auto l = q;
    l.kind = Kind::linear_lattice;
    l.lattice = Lattice(3, 32, 2.0 * kPi * 8.0);
    const auto a = run_experiment(q);
    const auto b = run_experiment(l);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CAPTURE(a.rows[i][0]);
      CHECK(std::abs(a.rows[i][1] - b.rows[i][1]) < 0.02 * a.rows[i][1]);
    }
  }

  TEST_CASE("zero data gives an all-zero table") {
    auto q = quadrature_experiment({1, 2, 1}, data::Family::gaussian);
    q.initial.amplitude = 0.0;
    auto l = q;
    l.kind = Kind::linear_lattice;
    l.lattice = Lattice(3, 16, 2.0 * kPi * 4.0);
    DecayExperiment n;
    n.kind = Kind::nonlinear;
    n.initial.amplitude = 0.0;
    n.solver.lattice = Lattice(2, 16, 2.0 * kPi);
    n.solver.t_end = 0.05;
    n.solver.dt = 0.01;
    n.solver.snapshot_stride = 1;
    for (const auto& e : {q, l, n}) {
      const auto t = run_experiment(e);
      REQUIRE(!t.rows.empty());
      for (const auto& row : t.rows)
        for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
    }
  }

  TEST_CASE("nonlinear experiment timeseries") {
    DecayExperiment e;
    e.kind = Kind::nonlinear;
    e.initial = {data::Family::gaussian, 1e-3};
    e.solver.lattice = Lattice(3, 16, 2.0 * kPi);
    e.solver.dt = 1e-2;
    e.solver.t_end = 0.2;
    e.solver.snapshot_stride = 5;
    const auto t = run_experiment(e);
    CHECK(t.columns == visco::timeseries_columns());
    REQUIRE(t.rows.size() == 5);
    const std::size_t m = t.column("M");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(std::abs(t.rows[i][t.column("mass")]) < 1e-12);
      for (const char* r : {"res_det", "res_div", "res_curl", "res_divUoverDet"}) CHECK(t.rows[i][t.column(r)] < 1e-9);
      if (i) CHECK(t.rows[i][m] >= t.rows[i - 1][m]);
    }
  }

  TEST_CASE("decay functionals") {
    const Lattice l(3, 16, 2.0 * kPi);
    const lp::DyadicPartition part(l);
    const visco::State eq(l);
    const auto z = visco::instantaneous_functionals(eq, 3.0, part, 0);
    CHECK(z.M1 + z.M2 + z.M3 + z.M4 + z.M == 0.0);

    const auto s = data::nonlinear_state(data::Family::gaussian, 1e-3, l);
    const auto f0 = visco::instantaneous_functionals(s, 0.0, part, 0);
    CHECK(f0.M4 == doctest::Approx(l2_norm(s.a) + l2_norm(s.F) + l2_norm(s.v)).epsilon(1e-14));
    CHECK(f0.M1 > 0.0);
    CHECK(f0.M2 > 0.0);
    CHECK(f0.M3 > 0.0);
    CHECK(f0.M > 0.0);

    // Weight (1 + t)^{n/4} and homogeneity of degree one.
    const auto f7 = visco::instantaneous_functionals(s, 7.0, part, 0);
    CHECK(f7.M1 == doctest::Approx(std::pow(8.0, 0.75) * f0.M1).epsilon(1e-13));
    CHECK(f7.M == doctest::Approx(std::pow(8.0, 0.75) * f0.M).epsilon(1e-13));
    const visco::State s3 = scaled(s, 3.0);
    const auto g = visco::instantaneous_functionals(s3, 0.0, part, 0);
    CHECK(g.M1 == doctest::Approx(3.0 * f0.M1).epsilon(1e-13));
    CHECK(g.M2 == doctest::Approx(3.0 * f0.M2).epsilon(1e-13));
    CHECK(g.M3 == doctest::Approx(3.0 * f0.M3).epsilon(1e-13));

    // Running sup: a shrinking state keeps the t = 0 value.
    const visco::State half = scaled(s, 0.5);
    const std::vector<visco::State> snaps{s, half};
    const std::vector<double> times{0.0, 0.1};
    const auto rows = visco::decay_functionals(snaps, times);
    CHECK(rows[1].functionals.M4 == rows[0].functionals.M4);
    CHECK(rows[1].l2_a == doctest::Approx(0.5 * rows[0].l2_a));
    const std::vector<double> bad_times{0.1, 0.1};
    CHECK_THROWS_AS(visco::decay_functionals(snaps, bad_times), InputError);
    CHECK_THROWS_AS(visco::decay_functionals(snaps, std::span<const double>(times).first(1)), InputError);
    CHECK(visco::timeseries_columns().size() == 14);
  }

  TEST_CASE("CSV round trip is exact") {
    test::Rng rng(11);
    DecayTable t{{"t", "value", "x"}, {}};
    for (int i = 0; i < 50; ++i)
      t.rows.push_back({test::uniform(rng, 0, 1e6), std::exp(test::uniform(rng, -700, 700)), -test::uniform(rng, 0, 1)});
    t.rows.push_back({0.0, 4.9e-324, -0.0});
    const std::string text = format_csv(t);
    CHECK(text.substr(0, 10) == "t,value,x\n");
    const auto back = parse_csv(text);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);
    CHECK(format_csv(back) == text);

    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", 0.1);
    CHECK(format_csv(DecayTable{{"t"}, {{0.1}}}) == std::string("t\n") + buf + "\n");
  }

  TEST_CASE("CSV parse errors") {
    CHECK_THROWS_AS(parse_csv(""), InputError);
    CHECK_THROWS_AS(parse_csv("t,value\n1,2,3\n"), InputError);
    CHECK_THROWS_AS(parse_csv("t,value\n1,abc\n"), InputError);
    CHECK_THROWS_AS(parse_csv("t,value\n1,\n"), InputError);
    CHECK_THROWS_AS(parse_csv("t,,value\n"), InputError);
    CHECK_THROWS_AS(read_csv("/nonexistent/x.csv"), InputError);
    const auto ok = parse_csv("t, value\r\n1, 2\r\n\n");
    CHECK(ok.columns[1] == "value");
    CHECK(ok.rows.size() == 1);
  }

  TEST_CASE("config parsing") {
    const auto c = config::parse_config(kFullConfig);
    CHECK(c.lattice == Lattice(2, 16, 12.5));
    CHECK(c.solver.lattice == c.lattice);
    CHECK(c.physics.mu == 0.75);
    CHECK(c.physics.lambda == 0.125);
    CHECK(c.physics.gamma == 1.5);
    CHECK_FALSE(c.simulate);
    CHECK(c.solver.dt == 0.002);
    CHECK(c.solver.snapshot_stride == 25);
    CHECK_FALSE(c.solver.dealias);
    CHECK(c.solver.cfl == 0.25);
    CHECK(c.threshold == 1);
    CHECK(c.initial.family == data::Family::annulus);
    REQUIRE(c.experiments.size() == 2);
    const auto& q = c.experiments[0];
    CHECK(q.name == "quad");
    CHECK(q.kind == Kind::linear_quadrature);
    CHECK(q.green.alpha == 2.0);
    CHECK(q.green.kappa == 1.5);
    CHECK(q.initial.family == data::Family::l1_bump);
    CHECK(q.initial.amplitude == 0.003);
    CHECK(q.times.size() == 33);
    CHECK(q.radial.r_cut == 24.0);
    CHECK(q.radial.rel_tol == 1e-10);
    const auto& n = c.experiments[1];
    CHECK(n.kind == Kind::nonlinear);
    CHECK(n.initial.family == data::Family::annulus);
    CHECK(n.solver.lattice == c.lattice);
    CHECK(n.threshold == 1);

    const auto d = config::parse_config("");
    CHECK(d.simulate);
    CHECK(d.experiments.empty());
    CHECK(d.lattice == Lattice(3, 32, 2.0 * kPi * 64.0));
  }

  TEST_CASE("config round trip") {
    const auto c = config::parse_config(kFullConfig);
    const std::string text = config::to_ini(c);
    const auto back = config::parse_config(text);
    CHECK(config::to_ini(back) == text);
    CHECK(back.physics.lambda == c.physics.lambda);
    CHECK(back.experiments[0].times == c.experiments[0].times);
    CHECK(back.experiments[0].radial.rel_tol == c.experiments[0].radial.rel_tol);
    const auto defaults = config::to_ini(config::parse_config(""));
    CHECK(config::to_ini(config::parse_config(defaults)) == defaults);
  }

  TEST_CASE("config rejects unknown and mistyped keys") {
    const char* bad[] = {
        "[lattice]\ncolour = red\n",
        "[latice]\ndim = 3\n",
        "[experiment]\nkind = nonlinear\n",
        "[experiment.x]\nspeed = 1\n",
        "[lattice]\npoints = 3.5\n",
        "[lattice]\npoints = 12\n",
        "[lattice]\ndim = 4\n",
        "[physics]\nmu = fast\n",
        "[physics]\nmu = -1\n",
        "[solver]\ndealias = yes\n",
        "[solver]\nscheme = euler\n",
        "[solver]\nsnapshot_stride = 0\n",
        "[initial]\nfamily = box\n",
        "[experiment.x]\nkind = linear\n",
        "[experiment.x]\nkind = linear-quadrature\nt_min = 1\nt_max = 10\n",
        "[experiment.x]\nkind = linear-quadrature\npoints = 5\n",
        "dim = 3\n",
        "[lattice\n",
    };
    for (const char* text : bad) {
      CAPTURE(text);
      CHECK_THROWS_AS(config::parse_config(text), InputError);
    }
    try {
      config::parse_config("[experiment.x]\nkind = linear-quadrature\nt_min = 1\nt_max = 10\n");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("experiment.x") != std::string::npos);
    }
    CHECK_THROWS_AS(config::load_config("/nonexistent/run.ini"), InputError);
  }
}
