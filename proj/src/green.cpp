#include "vdlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "vdlab/quadrature.hpp"

namespace vdlab::green {
namespace {

// Below this |z| = |D| t^2 / 4 the entries come from their power series.
constexpr double kSeriesSwitch = 1e-2;

// cosh(sqrt z) and sinh(sqrt z)/sqrt z for small real z.
void even_odd_series(double z, double& ch, double& sh) {
  ch = 1.0;
  sh = 1.0;
  double term_c = 1.0;
  double term_s = 1.0;
  for (int k = 1; k < 12; ++k) {
    term_c *= z / ((2.0 * k - 1.0) * (2.0 * k));
    term_s *= z / ((2.0 * k) * (2.0 * k + 1.0));
    ch += term_c;
    sh += term_s;
    if (std::abs(term_c) < 1e-18 && std::abs(term_s) < 1e-18) break;
  }
}

// kappa^2 r^4 - 4 alpha beta r^2 in factored form, exact at the double root.
double discriminant(const GreenParams& p, double r) {
  const double root = 2.0 * std::sqrt(p.alpha * p.beta);
  return r * r * (p.kappa * r - root) * (p.kappa * r + root);
}

}  // namespace

void GreenParams::validate() const {
  auto ok = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!ok(alpha) || !ok(beta) || !ok(kappa)) throw InputError("alpha, beta and kappa must be positive and finite");
}

double GreenParams::degenerate_radius() const { return 2.0 * std::sqrt(alpha * beta) / kappa; }

EigenPair eigenvalues(const GreenParams& params, double xi_mag) {
  if (!(xi_mag >= 0.0)) throw InputError("|xi| must be nonnegative");
  const double r = xi_mag;
  const double m = -0.5 * params.kappa * r * r;
  const double d = discriminant(params, r);
  const double scale = std::max(params.kappa * params.kappa * r * r * r * r, 4.0 * params.alpha * params.beta * r * r);
  EigenPair e;
  e.degenerate = std::abs(d) < kDegenerateTolerance * scale;
  if (d >= 0.0) {
    const double lm = m - 0.5 * std::sqrt(d);
    const double lp = lm != 0.0 ? params.alpha * params.beta * r * r / lm : 0.0;
    e.lambda_plus = lp;
    e.lambda_minus = lm;
  } else {
    const double w = 0.5 * std::sqrt(-d);
    e.lambda_plus = cplx(m, w);
    e.lambda_minus = cplx(m, -w);
  }
  return e;
}

double GreenMatrix::max_abs() const {
  double mx = 0.0;
  for (const auto& row : g)
    for (double x : row) mx = std::max(mx, std::abs(x));
  return mx;
}

GreenMatrix green_hat(const GreenParams& params, double xi_mag, double t) {
  if (!(t >= 0.0)) throw InputError("green_hat needs t >= 0");
  GreenMatrix out;
  out.g = {{{1.0, 0.0}, {0.0, 1.0}}};
  if (t == 0.0 || xi_mag == 0.0) return out;

  const double r = xi_mag;
  const double m = -0.5 * params.kappa * r * r;
  const double d = discriminant(params, r);
  const double z = 0.25 * d * t * t;

  if (std::abs(z) < kSeriesSwitch) {
    double ch = 0.0;
    double sh = 0.0;
    even_odd_series(z, ch, sh);
    const double emt = std::exp(m * t);
    const double e = emt * ch;
    const double phi = t * emt * sh;
    out.g = {{{e - m * phi, -params.alpha * r * phi}, {params.beta * r * phi, e + m * phi}}};
    return out;
  }

  const EigenPair ev = eigenvalues(params, r);
  const cplx lp = ev.lambda_plus;
  const cplx lm = ev.lambda_minus;
  const cplx s = d > 0.0 ? cplx(std::sqrt(d), 0.0) : cplx(0.0, std::sqrt(-d));
  const cplx ep = std::exp(lp * t);
  const cplx em = std::exp(lm * t);
  const cplx phi = (ep - em) / s;
  const cplx g11 = (lp * em - lm * ep) / s;
  const cplx g22 = (lp * ep - lm * em) / s;
  const cplx g12 = -params.alpha * r * phi;
  const cplx g21 = params.beta * r * phi;
  out.g = {{{g11.real(), g12.real()}, {g21.real(), g22.real()}}};
  out.imag_residue =
      std::max({std::abs(g11.imag()), std::abs(g12.imag()), std::abs(g21.imag()), std::abs(g22.imag())});
  return out;
}

std::pair<SpectralField, SpectralField> apply_semigroup(const GreenParams& params, const SpectralField& c,
                                                        const SpectralField& u, double t) {
  params.validate();
  require_same_lattice(c.lattice(), u.lattice(), "apply_semigroup");
  if (!(t >= 0.0)) throw InputError("apply_semigroup needs t >= 0");
  const Lattice& lattice = c.lattice();
  SpectralField c_out(lattice, c.hermitian() && u.hermitian());
  SpectralField u_out(lattice, c.hermitian() && u.hermitian());
  std::map<double, GreenMatrix> cache;
  for (std::size_t m = 0; m < lattice.size(); ++m) {
    const double r = lattice.magnitude(m);
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, green_hat(params, r, t)).first;
    const GreenMatrix& g = it->second;
    c_out[m] = g(0, 0) * c[m] + g(0, 1) * u[m];
    u_out[m] = g(1, 0) * c[m] + g(1, 1) * u[m];
  }
  return {std::move(c_out), std::move(u_out)};
}

double semigroup_energy(const GreenParams& params, const SpectralField& c, const SpectralField& u) {
  const double nc = l2_norm(c);
  const double nu = l2_norm(u);
  return params.beta * nc * nc + params.alpha * nu * nu;
}

BandDecayTable band_decay_curve(const GreenParams& params, const SpectralField& c, const SpectralField& u,
                                std::span<const double> times, const lp::DyadicPartition& partition, int R) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw InputError("band decay times must be nonnegative and increasing");
    }
  }
  BandDecayTable table;
  table.first_q = partition.q_min();
  table.times.assign(times.begin(), times.end());
  for (double t : times) {
    const auto [ct, ut] = apply_semigroup(params, c, u, t);
    auto norms = lp::block_norms({&ct, &ut}, 2.0, partition, true);
    double low = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k) {
      if (table.first_q + static_cast<int>(k) <= R) low += norms[k];
    }
    table.norms.push_back(std::move(norms));
    table.low_sum.push_back(low);
  }
  return table;
}

double sphere_area(int dim) {
  if (dim == 2) return 2.0 * kPi;
  if (dim == 3) return 4.0 * kPi;
  throw InputError("dimension must be 2 or 3");
}

double radial_decay_quadrature(const GreenParams& params, const RadialProfile& profile, int dim, double t,
                               const RadialOptions& options) {
  params.validate();
  if (!(t >= 0.0)) throw InputError("radial_decay_quadrature needs t >= 0");
  if (!(options.r_cut > 0.0)) throw InputError("r_cut must be positive");
  const double area = sphere_area(dim);

  auto integrand = [&](double r) {
    const auto p = profile(r);
    const GreenMatrix g = green_hat(params, r, t);
    const double a = g(0, 0) * p[0] + g(0, 1) * p[1];
    const double b = g(1, 0) * p[0] + g(1, 1) * p[1];
    return (a * a + b * b) * std::pow(r, dim - 1);
  };

  // Geometric ladder down to well below the diffusive scale 1/sqrt(kappa t),
  // so features at every scale land near a breakpoint.
  std::vector<double> bp{0.0, options.r_cut};
  const double r_lo = std::min(1e-2, 1e-2 / std::sqrt(params.kappa * (1.0 + t)));
  for (double r = options.r_cut / std::sqrt(2.0); r > r_lo; r /= std::sqrt(2.0)) bp.push_back(r);
  bp.push_back(params.degenerate_radius());
  for (double b : options.breakpoints) bp.push_back(b);
  std::erase_if(bp, [&](double b) { return b < 0.0 || b > options.r_cut; });
  std::sort(bp.begin(), bp.end());
  // Nearly coincident breakpoints (the ladder can land on the degenerate
  // radius) would leave a sliver the adaptive rule keeps bisecting.
  bp.erase(std::unique(bp.begin(), bp.end(), [](double a, double b) { return b - a <= 1e-9 * b; }), bp.end());

  const auto result = integrate_piecewise(integrand, bp, options.rel_tol);
  return std::sqrt(area * std::max(0.0, result.value));
}

BoundFit pointwise_bound_fit(const GreenParams& params, double R, const BoundGrid& grid) {
  params.validate();
  if (!(R > 0.0)) throw InputError("pointwise_bound_fit needs R > 0");
  if (grid.xi_points < 1 || grid.t_points < 2 || !(grid.t_min > 0.0) || !(grid.t_max > grid.t_min)) {
    throw InputError("pointwise_bound_fit: malformed grid");
  }
  BoundFit fit;
  fit.theta = std::numeric_limits<double>::infinity();
  const double log_ratio = std::log(grid.t_max / grid.t_min);
  for (int i = 1; i <= grid.xi_points; ++i) {
    const double r = R * i / grid.xi_points;
    for (int j = 0; j < grid.t_points; ++j) {
      const double t = grid.t_min * std::exp(log_ratio * j / (grid.t_points - 1));
      const double entry = green_hat(params, r, t).max_abs();
      if (entry == 0.0) continue;  // underflow: no constraint on theta
      const double theta = -std::log(entry / grid.constant) / (r * r * t);
      if (theta < fit.theta) fit = {theta, r, t};
    }
  }
  if (!(fit.theta > 0.0) || !std::isfinite(fit.theta)) {
    std::ostringstream msg;
    msg << "no positive theta satisfies the pointwise bound; worst point |xi| = " << fit.worst_xi
        << ", t = " << fit.worst_t << " gives theta = " << fit.theta;
    throw RuntimeError(msg.str());
  }
  return fit;
}

std::vector<SumBoundRow> sum_bound_scan(double theta, int R, std::span<const double> times) {
  if (!(theta > 0.0)) throw InputError("sum_bound_scan needs theta > 0");
  if (R < 0) throw InputError("sum_bound_scan needs R >= 0");
  auto term = [theta](int k, double t) {
    const double x = std::ldexp(t * theta, -2 * k);  // 4^{-k} t theta
    return std::exp(-(2.0 / 9.0) * x) * std::sqrt(-std::expm1(-(20.0 / 3.0) * x));
  };

  std::vector<SumBoundRow> rows;
  for (double t : times) {
    if (!(t > 0.0)) throw InputError("sum_bound_scan times must be positive");
    SumBoundRow row;
    row.t = t;
    const int K = static_cast<int>(std::floor(std::log((20.0 / 3.0) * t * theta) / std::log(4.0)));
    for (int k = -R; k <= 0; ++k) row.I += term(k, t);
    for (int k = 1; k <= K; ++k) row.II += term(k, t);
    for (int k = std::max(K, 0) + 1; k < 4000; ++k) {
      const double v = term(k, t);
      row.III += v;
      if (v == 0.0 || v < 1e-18 * (row.I + row.II + row.III)) break;
    }
    row.S = row.I + row.II + row.III;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vdlab::green
