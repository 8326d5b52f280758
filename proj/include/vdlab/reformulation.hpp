#pragma once

#include "vdlab/littlewood_paley.hpp"
#include "vdlab/solver.hpp"

namespace vdlab::visco {

/// Variables of the low/high frequency analysis.  T_ij below is
/// Lambda^{-1} d_i Lambda^{-1} d_j (symbol -xi_i xi_j / |xi|^2).
struct ReformulatedState {
  SpectralField a;
  SpectralField d;      // Lambda^{-1} div v
  MatrixField Omega;    // Lambda^{-1} (d_j v^i - d_i v^j)
  SpectralField Ecal;   // sum_ij T_ij (F^ij + F^ji)
  MatrixField FtF;      // F^T - F
  MatrixField e;        // e^ij = Lambda^{-1} d_j v^i
};

ReformulatedState reformulate(const State& state);

/// Nonlinear terms of the reformulated system.  With N_v the nonlinear part
/// of v_t,
///   N_v = -v.grad v + F grad F - K(a) grad a - C(a) A v,
///   (F grad F)^i = F^lk d_l F^ik,  div(aF)^j = d_i (a F^ij),
/// the exact solutions satisfy
///   a_t + Lambda d                          = L - v.grad a
///   d_t - nu Lap d - 2 Lambda a             = G - v.grad d
///   d_t - nu Lap d - Lambda Ecal            = K - v.grad d
///   Ecal_t + 2 Lambda d                     = J - v.grad Ecal
///   (F^T - F)_t + Lambda Omega              = I - v.grad (F^T - F)
///   Omega_t - mu Lap Omega - Lambda(F^T-F)  = H - v.grad Omega
///   e_t + v.grad e - mu Lap e - (lambda+mu) d_i d_j d
///       + Lambda^{-1} d_i d_j a + Lambda F  = G2
///   F_t + v.grad F - Lambda e               = G3
///   d_i F^ij + d_j a                        = G0^j
/// where G, K and G0 use the divergence constraint and H, G2 the curl
/// constraint.  W is the curl-constraint commutator inside H (not the elastic
/// energy).  Products are formed on the grid without dealiasing.
struct ForcingTerms {
  SpectralField L;
  SpectralField G;
  MatrixField H;
  MatrixField I;
  SpectralField J;
  SpectralField K;
  MatrixField W;
  VectorField G0;
  SpectralField G1;
  MatrixField G2;
  MatrixField G3;
};

/// InputError via validate(); BlowUpError when rho <= 0 somewhere.
ForcingTerms forcing_terms(const State& state, const PhysicalParams& params);

/// Block-q energy of the high frequency analysis (all blocks homogeneous):
///   f_q^2 = |Dq e|^2 + nu |Lambda Dq a|^2 + mu |Lambda Dq F|^2
///           + (lambda+mu) |Lambda^{-1} d_i d_j Dq F^ij|^2
///           - 2 (Lambda Dq a | Dq d) + 2 (Lambda Dq F | Dq e)
///   ftilde_q^2 = (mu-1) |Lambda Dq e|^2 + (lambda+mu-1) |Lambda Dq d|^2
///           + |Lambda Dq a|^2 + |Lambda Dq F|^2
///           - (Dq a | Lambda Dq d) + (Lambda Dq F | Dq e)
///   E_q = 2^{(n/2-1) q} f_q
/// and `reference` = 2^{(n/2) q} |Dq a, Dq F| + 2^{(n/2-1) q} |Dq e|, the
/// quantity E_q is equivalent to.  When f_q^2 < 0 (the form is not positive
/// for the given Lame pair) E_q is reported as 0.
struct HighFreqEnergy {
  double E = 0.0;
  double f2 = 0.0;
  double f2_tilde = 0.0;
  double reference = 0.0;
};

HighFreqEnergy high_freq_energy(const State& state, int q, const PhysicalParams& params,
                                const lp::DyadicPartition& partition);

}  // namespace vdlab::visco
