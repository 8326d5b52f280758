#include "vdlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vdlab/kernels.hpp"

namespace vdlab::visco {
namespace {

std::span<double> flat(ComplexVector& c) { return {reinterpret_cast<double*>(c.data()), 2 * c.size()}; }
std::span<const double> flat(const ComplexVector& c) {
  return {reinterpret_cast<const double*>(c.data()), 2 * c.size()};
}

// det(I + X) - 1 without forming I + X.
template <class M>
double det_minus_one(const M& x, int dim) {
  if (dim == 2) return x(0, 0) + x(1, 1) + (x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0));
  const double tr = x(0, 0) + x(1, 1) + x(2, 2);
  const double minors = (x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0)) + (x(0, 0) * x(2, 2) - x(0, 2) * x(2, 0)) +
                        (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1));
  const double det = x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1)) -
                     x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0)) +
                     x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
  return tr + minors + det;
}

// Pointwise 3x3 (or 2x2) matrix gathered from per-component grid arrays.
struct PointMatrix {
  double m[3][3] = {};
  double operator()(int i, int j) const { return m[i][j]; }
};

double max_abs(std::span<const double> x) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  return mx;
}

std::vector<RealVector> to_grid(const MatrixField& m) {
  std::vector<RealVector> out;
  for (const auto& c : m.components()) out.push_back(dft_inverse(c));
  return out;
}

}  // namespace

double pressure_k(double a, double gamma) { return std::expm1((gamma - 2.0) * std::log1p(a)); }

double viscous_c(double a) { return a / (1.0 + a); }

void PhysicalParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InputError("mu must be positive");
  if (!(nu() > 0.0) || !std::isfinite(lambda)) throw InputError("lambda + 2 mu must be positive");
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw InputError("pressure gamma must exceed 1");
}

State::State(const Lattice& lattice) : a(lattice), v(lattice), F(lattice) {}

State::State(SpectralField a_, VectorField v_, MatrixField F_) : a(std::move(a_)), v(std::move(v_)), F(std::move(F_)) {
  require_same_lattice(a.lattice(), v.lattice(), "state");
  require_same_lattice(a.lattice(), F.lattice(), "state");
}

State init_from_displacement(const VectorField& psi, const VectorField* velocity) {
  const Lattice& lattice = psi.lattice();
  const int d = lattice.dim();
  if (velocity) require_same_lattice(lattice, velocity->lattice(), "initial velocity");

  // G_ij = d_j psi_i on the grid.
  std::vector<RealVector> g(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g[i * d + j] = dft_inverse(partial(psi[i], j));

  const std::size_t n = lattice.size();
  RealVector a(n);
  std::vector<RealVector> f(d * d, RealVector(n));
  for (std::size_t x = 0; x < n; ++x) {
    PointMatrix minus_g;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) minus_g.m[i][j] = -g[i * d + j][x];
    const double detm1 = det_minus_one(minus_g, d);
    if (!(1.0 + detm1 > 0.5)) {
      std::ostringstream msg;
      msg << "displacement too large: det(I - grad psi) = " << 1.0 + detm1 << " at grid point " << x
          << " (must exceed 1/2)";
      throw InputError(msg.str());
    }
    // A = I - G, U = A^{-1} = adj(A)/det(A), F = U - I = U G.
    double A[3][3] = {};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A[i][j] = (i == j ? 1.0 : 0.0) - g[i * d + j][x];
    double U[3][3] = {};
    const double det = 1.0 + detm1;
    if (d == 2) {
      U[0][0] = A[1][1] / det;
      U[0][1] = -A[0][1] / det;
      U[1][0] = -A[1][0] / det;
      U[1][1] = A[0][0] / det;
    } else {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
          U[i][j] = (A[r0][c0] * A[r1][c1] - A[r0][c1] * A[r1][c0]) / det;
        }
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += U[i][k] * g[k * d + j][x];
        f[i * d + j][x] = s;
      }
    }
    a[x] = detm1;
  }

  State s(lattice);
  s.a = dft_forward(a, lattice);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s.F(i, j) = dft_forward(f[i * d + j], lattice);
  if (velocity) s.v = *velocity;
  return s;
}

ConstraintReport check_constraints(const State& state) {
  const Lattice& lattice = state.lattice();
  const int d = lattice.dim();
  const std::size_t n = lattice.size();
  ConstraintReport report;

  const RealVector a = dft_inverse(state.a);
  const auto f = to_grid(state.F);
  // dF[(i*d + j)*d + k] = d_k F_ij
  std::vector<RealVector> df;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) df.push_back(dft_inverse(partial(state.F(i, j), k)));

  RealVector detm1(n);
  std::vector<RealVector> af(d * d, RealVector(n));
  std::vector<RealVector> w(d * d, RealVector(n));
  for (std::size_t x = 0; x < n; ++x) {
    PointMatrix fx;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) fx.m[i][j] = f[i * d + j][x];
    detm1[x] = det_minus_one(fx, d);
    report.det = std::max(report.det, std::abs(a[x] + detm1[x] + a[x] * detm1[x]));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        af[i * d + j][x] = a[x] * fx.m[i][j];
        // U/det U - I = (F - (det U - 1) I) / det U
        w[i * d + j][x] = (fx.m[i][j] - (i == j ? detm1[x] : 0.0)) / (1.0 + detm1[x]);
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
          double r = df[(i * d + j) * d + k][x] - df[(i * d + k) * d + j][x];
          for (int l = 0; l < d; ++l) {
            r += fx.m[l][k] * df[(i * d + j) * d + l][x] - fx.m[l][j] * df[(i * d + k) * d + l][x];
          }
          report.curl = std::max(report.curl, std::abs(r));
        }
      }
    }
  }

  for (int j = 0; j < d; ++j) {
    SpectralField div = partial(state.a, j);
    SpectralField div_w(lattice);
    for (int i = 0; i < d; ++i) {
      div += partial(state.F(i, j), i);
      div += partial(dft_forward(af[i * d + j], lattice), i);
      div_w += partial(dft_forward(w[i * d + j], lattice), i);
    }
    report.div = std::max(report.div, max_abs(dft_inverse(div)));
    report.div_u_over_det = std::max(report.div_u_over_det, max_abs(dft_inverse(div_w)));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Integrator

struct Integrator::Impl {
  Impl(const Lattice& lattice, const PhysicalParams& p, bool dealias_, double cfl_)
      : hs(lattice), params(p), dealias(dealias_), cfl(cfl_), d(lattice.dim()), nf(1 + d + d * d) {
    params.validate();
    if (!(cfl > 0.0)) throw InputError("cfl must be positive");
    const std::size_t nh = hs.size();
    const std::size_t n = lattice.size();
    u.assign(nf, ComplexVector(nh));
    n0 = u;
    n1 = u;
    tmp = u;
    spec.resize(nh);
    spec2.resize(nh);
    a_.resize(n);
    c_.resize(n);
    kp1_.resize(n);
    da.assign(d, RealVector(n));
    vel.assign(d, RealVector(n));
    dv.assign(d * d, RealVector(n));
    fm.assign(d * d, RealVector(n));
    df.assign(d * d * d, RealVector(n));
    av.assign(d, RealVector(n));
    flux.assign(d, RealVector(n));
    out_v.assign(d, RealVector(n));
    out_f.assign(d * d, RealVector(n));
  }

  int ia() const { return 0; }
  int iv(int i) const { return 1 + i; }
  int iF(int i, int j) const { return 1 + d + i * d + j; }

  void to_grid(const ComplexVector& h, RealVector& out) { hs.inverse(h, out); }

  void derivative_to_grid(const ComplexVector& h, int axis, RealVector& out) {
    simd::active().derivative(spec, h, hs.derivative_wavenumbers(axis));
    hs.inverse(spec, out);
  }

  // A v in half-spectrum form, component i, written to `spec`.
  void viscous(const std::vector<ComplexVector>& s, int i, ComplexVector& out) {
    const auto& K = simd::active();
    std::fill(spec2.begin(), spec2.end(), cplx(0.0, 0.0));
    for (int j = 0; j < d; ++j) K.derivative_add(spec2, s[iv(j)], hs.derivative_wavenumbers(j));
    K.derivative(out, spec2, hs.derivative_wavenumbers(i));
    const auto mag = hs.magnitudes();
    const double lm = params.lambda + params.mu;
    for (std::size_t h = 0; h < out.size(); ++h) {
      out[h] = lm * out[h] - (params.mu * mag[h] * mag[h]) * s[iv(i)][h];
    }
  }

  // out = N(s): the time derivative without the viscous term on v.
  void nonlinear(const std::vector<ComplexVector>& s, std::vector<ComplexVector>& out) {
    const auto& K = simd::active();
    const std::size_t n = a_.size();

    to_grid(s[ia()], a_);
    for (int j = 0; j < d; ++j) derivative_to_grid(s[ia()], j, da[j]);
    for (int i = 0; i < d; ++i) {
      to_grid(s[iv(i)], vel[i]);
      for (int j = 0; j < d; ++j) derivative_to_grid(s[iv(i)], j, dv[i * d + j]);
      viscous(s, i, spec);
      hs.inverse(spec, av[i]);
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        to_grid(s[iF(i, j)], fm[i * d + j]);
        for (int k = 0; k < d; ++k) derivative_to_grid(s[iF(i, j)], k, df[(i * d + j) * d + k]);
      }
    }

    max_speed = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double rho = 1.0 + a_[x];
      if (!(rho > 0.0)) {
        std::ostringstream msg;
        msg << "density " << (std::isfinite(rho) ? "non-positive" : "non-finite") << " (rho = " << rho
            << ") at grid point " << x;
        throw BlowUpError(msg.str());
      }
      c_[x] = viscous_c(a_[x]);
      kp1_[x] = std::exp((params.gamma - 2.0) * std::log1p(a_[x]));
      double speed2 = 0.0;
      for (int i = 0; i < d; ++i) speed2 += vel[i][x] * vel[i][x];
      if (!std::isfinite(speed2)) throw BlowUpError("non-finite velocity at grid point " + std::to_string(x));
      max_speed = std::max(max_speed, std::sqrt(speed2));
    }

    // The products run over cache-sized chunks: every grid array is touched
    // once per chunk instead of once per term.
    constexpr std::size_t kChunk = 1024;
    for (std::size_t x0 = 0; x0 < n; x0 += kChunk) {
      const std::size_t len = std::min(kChunk, n - x0);
      auto w = [&](RealVector& v) { return std::span<double>(v).subspan(x0, len); };
      auto r = [&](const RealVector& v) { return std::span<const double>(v).subspan(x0, len); };
      for (int i = 0; i < d; ++i) {
        K.mul(w(flux[i]), r(a_), r(vel[i]));

        // v_t: d_k F_ik + F_jk d_j F_ik - v_j d_j v_i - C(a) (A v)_i - (1+K(a)) d_i a
        const auto o = w(out_v[i]);
        const auto first = r(df[(i * d + 0) * d + 0]);
        std::copy(first.begin(), first.end(), o.begin());
        for (int k = 1; k < d; ++k) K.axpy(o, 1.0, r(df[(i * d + k) * d + k]));
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) K.mul_add(o, r(fm[j * d + k]), r(df[(i * d + k) * d + j]));
        for (int j = 0; j < d; ++j) K.mul_sub(o, r(vel[j]), r(dv[i * d + j]));
        K.mul_sub(o, r(c_), r(av[i]));
        K.mul_sub(o, r(kp1_), r(da[i]));

        // F_t: d_j v_i - v_k d_k F_ij + d_k v_i F_kj
        for (int j = 0; j < d; ++j) {
          const auto of = w(out_f[i * d + j]);
          const auto lin = r(dv[i * d + j]);
          std::copy(lin.begin(), lin.end(), of.begin());
          for (int k = 0; k < d; ++k) K.mul_sub(of, r(vel[k]), r(df[(i * d + j) * d + k]));
          for (int k = 0; k < d; ++k) K.mul_add(of, r(dv[i * d + k]), r(fm[k * d + j]));
        }
      }
    }

    // a_t = -div(v + a v); the zero mode stays exactly 0.
    std::fill(out[ia()].begin(), out[ia()].end(), cplx(0.0, 0.0));
    for (int i = 0; i < d; ++i) {
      hs.forward(flux[i], spec);
      for (std::size_t h = 0; h < spec.size(); ++h) spec[h] += s[iv(i)][h];
      K.derivative_add(out[ia()], spec, hs.derivative_wavenumbers(i));
    }
    for (auto& c : out[ia()]) c = -c;
    for (int i = 0; i < d; ++i) {
      hs.forward(out_v[i], out[iv(i)]);
      for (int j = 0; j < d; ++j) hs.forward(out_f[i * d + j], out[iF(i, j)]);
    }
    if (dealias) {
      for (auto& f : out) K.scale_by_symbol(f, hs.dealias_mask());
    }
  }

  void prepare_propagator(double h) {
    if (h == prop_dt) return;
    const std::size_t nh = hs.size();
    e_t.resize(nh);
    c_l.resize(nh);
    const auto mag = hs.magnitudes();
    const double lm = params.lambda + params.mu;
    for (std::size_t m = 0; m < nh; ++m) {
      double k2 = 0.0;
      for (int j = 0; j < d; ++j) k2 += hs.derivative_wavenumbers(j)[m] * hs.derivative_wavenumbers(j)[m];
      const double et = std::exp(-params.mu * mag[m] * mag[m] * h);
      e_t[m] = et;
      c_l[m] = k2 > 0.0 ? (std::exp(-params.mu * mag[m] * mag[m] * h - lm * k2 * h) - et) / k2 : 0.0;
    }
    prop_dt = h;
  }

  // E(h): v -> e^{-mu|xi|^2 h} [(I - P) + e^{-(lambda+mu)|k|^2 h} P] v, P = k k^T/|k|^2.
  // Modes above the dealiasing cutoff only decay; parts below kFlush are set
  // to 0 before they reach the (slow) subnormal range.
  void propagate(std::vector<ComplexVector>& s) {
    constexpr double kFlush = 1e-250;
    auto flush = [](double x) { return std::abs(x) < kFlush ? 0.0 : x; };
    const std::size_t nh = hs.size();
    for (std::size_t m = 0; m < nh; ++m) {
      cplx kv = 0.0;
      for (int j = 0; j < d; ++j) kv += hs.derivative_wavenumbers(j)[m] * s[iv(j)][m];
      for (int i = 0; i < d; ++i) {
        const cplx z = e_t[m] * s[iv(i)][m] + (c_l[m] * hs.derivative_wavenumbers(i)[m]) * kv;
        s[iv(i)][m] = cplx(flush(z.real()), flush(z.imag()));
      }
    }
  }

  void combine(std::vector<ComplexVector>& dst, const std::vector<ComplexVector>& base, double h,
               const std::vector<ComplexVector>& incr) {
    const auto& K = simd::active();
    for (int f = 0; f < nf; ++f) {
      std::copy(base[f].begin(), base[f].end(), dst[f].begin());
      K.axpy(flat(dst[f]), h, flat(incr[f]));
    }
  }

  void substep(double h, bool have_n0) {
    prepare_propagator(h);
    if (!have_n0) nonlinear(u, n0);
    combine(tmp, u, h, n0);
    propagate(tmp);
    nonlinear(tmp, n1);
    combine(tmp, u, 0.5 * h, n0);
    propagate(tmp);
    const auto& K = simd::active();
    for (int f = 0; f < nf; ++f) K.axpy(flat(tmp[f]), 0.5 * h, flat(n1[f]));
    double total = 0.0;
    for (int f = 0; f < nf; ++f) total += K.sum_squares(flat(tmp[f]));
    if (!std::isfinite(total)) throw BlowUpError("non-finite coefficients after a step");
    std::swap(u, tmp);
  }

  void step(double dt) {
    if (!(dt > 0.0)) throw InputError("time step must be positive");
    nonlinear(u, n0);
    const double dx = hs.lattice().spacing();
    int sub = 1;
    if (max_speed * dt > cfl * dx) sub = static_cast<int>(std::ceil(max_speed * dt / (cfl * dx)));
    substeps = sub;
    const double h = dt / sub;
    for (int k = 0; k < sub; ++k) substep(h, k == 0);
  }

  HalfSpectrum hs;
  PhysicalParams params;
  bool dealias;
  double cfl;
  int d;
  int nf;
  std::vector<ComplexVector> u, n0, n1, tmp;
  ComplexVector spec, spec2;
  RealVector a_, c_, kp1_;
  std::vector<RealVector> da, vel, dv, fm, df, av, flux, out_v, out_f;
  RealVector e_t, c_l;
  double prop_dt = std::numeric_limits<double>::quiet_NaN();
  double max_speed = 0.0;
  int substeps = 1;
};

Integrator::Integrator(const Lattice& lattice, const PhysicalParams& params, bool dealias, double cfl)
    : impl_(std::make_unique<Impl>(lattice, params, dealias, cfl)) {}

Integrator::~Integrator() = default;

void Integrator::load(const State& state) {
  require_same_lattice(impl_->hs.lattice(), state.lattice(), "integrator");
  const int d = impl_->d;
  impl_->u[impl_->ia()] = impl_->hs.restrict(state.a);
  for (int i = 0; i < d; ++i) {
    impl_->u[impl_->iv(i)] = impl_->hs.restrict(state.v[i]);
    for (int j = 0; j < d; ++j) impl_->u[impl_->iF(i, j)] = impl_->hs.restrict(state.F(i, j));
  }
}

State Integrator::state() const {
  const auto& hs = impl_->hs;
  const int d = impl_->d;
  State s(hs.lattice());
  s.a = hs.expand(impl_->u[impl_->ia()]);
  for (int i = 0; i < d; ++i) {
    s.v[i] = hs.expand(impl_->u[impl_->iv(i)]);
    for (int j = 0; j < d; ++j) s.F(i, j) = hs.expand(impl_->u[impl_->iF(i, j)]);
  }
  return s;
}

void Integrator::step(double dt) { impl_->step(dt); }

int Integrator::last_substeps() const { return impl_->substeps; }

State Integrator::nonlinear() const {
  impl_->nonlinear(impl_->u, impl_->n0);
  const auto& hs = impl_->hs;
  const int d = impl_->d;
  State s(hs.lattice());
  s.a = hs.expand(impl_->n0[impl_->ia()]);
  for (int i = 0; i < d; ++i) {
    s.v[i] = hs.expand(impl_->n0[impl_->iv(i)]);
    for (int j = 0; j < d; ++j) s.F(i, j) = hs.expand(impl_->n0[impl_->iF(i, j)]);
  }
  return s;
}

State rhs(const State& state, const PhysicalParams& params, bool dealias) {
  Integrator it(state.lattice(), params, dealias);
  it.load(state);
  State out = it.nonlinear();
  // Add the viscous term that the integrator otherwise applies exactly.
  const int d = state.dim();
  SpectralField div = partial(state.v[0], 0);
  for (int j = 1; j < d; ++j) div += partial(state.v[j], j);
  for (int i = 0; i < d; ++i) {
    SpectralField visc = (params.lambda + params.mu) * partial(div, i) - params.mu * lambda_power(state.v[i], 2.0);
    out.v[i] += dealias ? vdlab::dealias(visc) : visc;
  }
  return out;
}

State step(const State& state, const PhysicalParams& params, double dt, bool dealias) {
  Integrator it(state.lattice(), params, dealias);
  it.load(state);
  it.step(dt);
  return it.state();
}

SimulationResult simulate(const SolverConfig& config, const PhysicalParams& params, const State& initial,
                          const Observer& observer) {
  require_same_lattice(config.lattice, initial.lattice(), "simulate");
  if (!(config.dt > 0.0) || !(config.t_end > 0.0)) throw InputError("dt and t_end must be positive");
  if (config.snapshot_stride < 1) throw InputError("snapshot_stride must be at least 1");

  Integrator it(config.lattice, params, config.dealias, config.cfl);
  it.load(initial);
  if (observer) observer(0, 0.0, initial);

  // Whole steps of dt; a final short step lands exactly on t_end.
  const long full = static_cast<long>(std::floor(config.t_end / config.dt * (1.0 + 1e-12)));
  const double rest = config.t_end - full * config.dt;
  const bool tail = rest > 1e-12 * config.t_end;
  const long total = full + (tail ? 1 : 0);

  SimulationResult result{initial, 0.0, 0, false, {}};
  for (long n = 1; n <= total; ++n) {
    const bool last = n == total;
    const double h = (last && tail) ? rest : config.dt;
    const double t = (last && tail) ? config.t_end : n * config.dt;
    try {
      it.step(h);
    } catch (const BlowUpError& e) {
      std::ostringstream msg;
      msg << "blow-up during step " << n << " (t = " << (n - 1) * config.dt << " -> " << t << "): " << e.what();
      result.blew_up = true;
      result.diagnostics = msg.str();
      result.final_state = it.state();
      return result;
    }
    result.steps = n;
    result.t = t;
    if (observer && (n % config.snapshot_stride == 0 || last)) observer(n, t, it.state());
  }
  result.final_state = it.state();
  return result;
}

}  // namespace vdlab::visco
