#include "vdlab/reformulation.hpp"

#include <cmath>
#include <sstream>

namespace vdlab::visco {
namespace {

// T_ij = Lambda^{-1} d_i Lambda^{-1} d_j.
SpectralField double_riesz(const SpectralField& f, int i, int j) { return riesz(riesz(f, i), j); }

RealVector product(const RealVector& x, const RealVector& y) {
  RealVector out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[n] = x[n] * y[n];
  return out;
}

void add_product(RealVector& out, double s, const RealVector& x, const RealVector& y) {
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += s * x[n] * y[n];
}

// Grid values shared by all forcing terms.
struct Grid {
  explicit Grid(const State& s, const PhysicalParams& params) : lattice(s.lattice()), dim(s.dim()) {
    const int d = dim;
    const std::size_t n = lattice.size();
    a = dft_inverse(s.a);
    for (int j = 0; j < d; ++j) da.push_back(dft_inverse(partial(s.a, j)));
    SpectralField div = partial(s.v[0], 0);
    for (int j = 1; j < d; ++j) div += partial(s.v[j], j);
    div_v = dft_inverse(div);
    for (int i = 0; i < d; ++i) {
      v.push_back(dft_inverse(s.v[i]));
      for (int j = 0; j < d; ++j) dv.push_back(dft_inverse(partial(s.v[i], j)));
      const SpectralField av = (params.lambda + params.mu) * partial(div, i) - params.mu * lambda_power(s.v[i], 2.0);
      Av.push_back(dft_inverse(av));
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        F.push_back(dft_inverse(s.F(i, j)));
        for (int k = 0; k < d; ++k) dF.push_back(dft_inverse(partial(s.F(i, j), k)));
      }
    }
    C.resize(n);
    K.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (!(1.0 + a[x] > 0.0)) {
        std::ostringstream msg;
        msg << "density non-positive (rho = " << 1.0 + a[x] << ") at grid point " << x;
        throw BlowUpError(msg.str());
      }
      C[x] = viscous_c(a[x]);
      K[x] = pressure_k(a[x], params.gamma);
    }
  }

  const RealVector& dvij(int i, int j) const { return dv[i * dim + j]; }
  const RealVector& Fij(int i, int j) const { return F[i * dim + j]; }
  // d_k F^ij
  const RealVector& dFijk(int i, int j, int k) const { return dF[(i * dim + j) * dim + k]; }

  SpectralField spectral(const RealVector& g) const { return dft_forward(g, lattice); }

  // v . grad f
  SpectralField advect(const SpectralField& f) const {
    RealVector out(lattice.size(), 0.0);
    for (int k = 0; k < dim; ++k) add_product(out, 1.0, v[k], dft_inverse(partial(f, k)));
    return spectral(out);
  }

  // Q^ijk = F^lk d_l F^ij - F^lj d_l F^ik; the curl constraint reads
  // d_k F^ij - d_j F^ik + Q^ijk = 0.
  RealVector Q(int i, int j, int k) const {
    RealVector out(lattice.size(), 0.0);
    for (int l = 0; l < dim; ++l) {
      add_product(out, 1.0, Fij(l, k), dFijk(i, j, l));
      add_product(out, -1.0, Fij(l, j), dFijk(i, k, l));
    }
    return out;
  }

  // sum_k Lambda^{-1} d_k Q^ijk
  SpectralField riesz_q(int i, int j) const {
    SpectralField out(lattice);
    for (int k = 0; k < dim; ++k) out += riesz(spectral(Q(i, j, k)), k);
    return out;
  }

  Lattice lattice;
  int dim;
  RealVector a, div_v, C, K;
  std::vector<RealVector> da, v, dv, Av, F, dF;
};

}  // namespace

ReformulatedState reformulate(const State& state) {
  const Lattice& lattice = state.lattice();
  const int dim = state.dim();
  ReformulatedState r{state.a, leray_div(state.v), leray_curl(state.v), SpectralField(lattice), MatrixField(lattice),
                      MatrixField(lattice)};
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      r.Ecal += double_riesz(state.F(i, j) + state.F(j, i), i, j);
      r.FtF(i, j) = state.F(j, i) - state.F(i, j);
      r.e(i, j) = riesz(state.v[i], j);
    }
  }
  return r;
}

ForcingTerms forcing_terms(const State& state, const PhysicalParams& params) {
  params.validate();
  const Lattice& lattice = state.lattice();
  const int dim = state.dim();
  const Grid g(state, params);
  const ReformulatedState r = reformulate(state);

  // N_v on the grid, then in Fourier space.
  VectorField nv(lattice);
  for (int i = 0; i < dim; ++i) {
    RealVector out(lattice.size(), 0.0);
    for (int k = 0; k < dim; ++k) {
      add_product(out, -1.0, g.v[k], g.dvij(i, k));
      for (int l = 0; l < dim; ++l) add_product(out, 1.0, g.Fij(l, k), g.dFijk(i, k, l));
    }
    add_product(out, -1.0, g.K, g.da[i]);
    add_product(out, -1.0, g.C, g.Av[i]);
    nv[i] = g.spectral(out);
  }
  // div(aF)^j = d_i (a F^ij)
  VectorField div_af(lattice);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) div_af[j] += partial(g.spectral(product(g.a, g.Fij(i, j))), i);

  MatrixField g3(lattice);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      RealVector out(lattice.size(), 0.0);
      for (int k = 0; k < dim; ++k) add_product(out, 1.0, g.dvij(i, k), g.Fij(k, j));
      g3(i, j) = g.spectral(out);
    }
  }

  ForcingTerms t{SpectralField(lattice), SpectralField(lattice), MatrixField(lattice), MatrixField(lattice),
                 SpectralField(lattice), SpectralField(lattice), MatrixField(lattice), VectorField(lattice),
                 SpectralField(lattice), MatrixField(lattice), MatrixField(lattice)};

  RealVector l = product(g.a, g.div_v);
  for (double& x : l) x = -x;
  t.L = g.spectral(l);
  t.G1 = t.L;

  const SpectralField adv_d = g.advect(r.d);
  VectorField minus(lattice), plus(lattice);
  for (int j = 0; j < dim; ++j) {
    minus[j] = nv[j] - div_af[j];
    plus[j] = nv[j] + div_af[j];
    t.G0[j] = -1.0 * div_af[j];
  }
  t.G = adv_d + leray_div(minus);
  t.K = adv_d + leray_div(plus);

  std::vector<SpectralField> rq;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) rq.push_back(g.riesz_q(i, j));
  const MatrixField curl_nv = leray_curl(nv);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      t.W(i, j) = rq[i * dim + j] - rq[j * dim + i];
      t.H(i, j) = g.advect(r.Omega(i, j)) + curl_nv(i, j) + t.W(i, j);
      t.I(i, j) = g3(j, i) - g3(i, j);
      t.G3(i, j) = g3(i, j);
      t.G2(i, j) = g.advect(r.e(i, j)) + riesz(nv[i], j) + rq[i * dim + j];
    }
  }

  // J = -sum_ij [T_ij, v^k] d_k S^ij + sum_ij T_ij (G3^ij + G3^ji), S = F + F^T.
  SpectralField t_adv(lattice);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t_adv += double_riesz(g.advect(state.F(i, j) + state.F(j, i)), i, j);
  t.J = g.advect(r.Ecal) - t_adv;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) t.J += double_riesz(g3(i, j) + g3(j, i), i, j);
  return t;
}

HighFreqEnergy high_freq_energy(const State& state, int q, const PhysicalParams& params,
                                const lp::DyadicPartition& partition) {
  params.validate();
  require_same_lattice(state.lattice(), partition.lattice(), "high_freq_energy");
  const int dim = state.dim();
  // Blocks commute with every multiplier, so localize the state first.
  const RealVector sym = partition.block_symbol(q, true);
  auto block = [&](const SpectralField& f) { return apply_real_symbol(f, sym); };
  auto sq = [](const SpectralField& f) {
    const double n = l2_norm(f);
    return n * n;
  };

  const SpectralField a = block(state.a);
  VectorField v(state.lattice());
  for (int i = 0; i < dim; ++i) v[i] = block(state.v[i]);
  const SpectralField d = leray_div(v);
  const SpectralField la = lambda_power(a, 1.0);
  const SpectralField ld = lambda_power(d, 1.0);

  double e2 = 0.0, le2 = 0.0, f2 = 0.0, lf2 = 0.0, lf_e = 0.0;
  SpectralField hess(state.lattice());
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const SpectralField e = riesz(v[i], j);
      const SpectralField f = block(state.F(i, j));
      const SpectralField lf = lambda_power(f, 1.0);
      e2 += sq(e);
      le2 += sq(lambda_power(e, 1.0));
      f2 += sq(f);
      lf2 += sq(lf);
      lf_e += inner_product(lf, e);
      hess += riesz_hessian(f, i, j);
    }
  }
  const double la2 = sq(la);
  const double lm = params.lambda + params.mu;

  HighFreqEnergy out;
  out.f2 = e2 + params.nu() * la2 + params.mu * lf2 + lm * sq(hess) - 2.0 * inner_product(la, d) + 2.0 * lf_e;
  out.f2_tilde = (params.mu - 1.0) * le2 + (lm - 1.0) * sq(ld) + la2 + lf2 - inner_product(a, ld) + lf_e;
  const double n = dim;
  out.E = out.f2 > 0.0 ? std::exp2((n / 2.0 - 1.0) * q) * std::sqrt(out.f2) : 0.0;
  out.reference = std::exp2(n / 2.0 * q) * std::sqrt(sq(a) + f2) + std::exp2((n / 2.0 - 1.0) * q) * std::sqrt(e2);
  return out;
}

}  // namespace vdlab::visco
