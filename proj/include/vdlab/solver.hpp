#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vdlab/half_spectrum.hpp"
#include "vdlab/spectral_field.hpp"

namespace vdlab::visco {

/// Lame coefficients and the pressure law P(rho) = rho^gamma / gamma, so that
/// P'(1) = 1.
struct PhysicalParams {
  double mu = 1.0;
  double lambda = 0.0;
  double gamma = 1.4;

  void validate() const;
  double nu() const { return lambda + 2.0 * mu; }
};

/// a = rho - 1, velocity v, F = U - I.
struct State {
  SpectralField a;
  VectorField v;
  MatrixField F;

  explicit State(const Lattice& lattice);
  State(SpectralField a, VectorField v, MatrixField F);

  const Lattice& lattice() const { return a.lattice(); }
  int dim() const { return lattice().dim(); }
};

/// Raised when rho <= 0 or a non-finite value appears.
class BlowUpError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

/// Deformation built from a displacement psi: reference coordinates
/// X = x - psi(x), so U = dx/dX = (I - grad psi)^{-1} and
/// rho = det(I - grad psi).  U is then a true deformation gradient (the
/// curl-type identity holds) and rho det U = 1 pointwise.
///
/// InputError unless det(I - grad psi) > 1/2 at every grid point.
State init_from_displacement(const VectorField& psi, const VectorField* velocity = nullptr);

/// Max-norm residuals of the four compatibility identities.
struct ConstraintReport {
  double det = 0.0;              // rho det U - 1
  double div = 0.0;              // d_i (rho U^{ij})
  double curl = 0.0;             // U^{lk} d_l U^{ij} - U^{lj} d_l U^{ik}
  double div_u_over_det = 0.0;   // d_i (U^{ij} / det U)
};

ConstraintReport check_constraints(const State& state);

/// Full time derivative (a_t, v_t, F_t):
///   a_t = -div((1+a) v)
///   v_t = -v.grad v + (1/rho) A v - rho^{gamma-2} grad a + U^{jk} d_j U^{ik}
///   F_t = -v.grad F + grad v U
/// with A v = mu Lap v + (lambda + mu) grad div v.  Products are formed on the
/// grid; the result is dealiased when requested.
State rhs(const State& state, const PhysicalParams& params, bool dealias = true);

/// Time integrator: integrating-factor Heun.  The constant-coefficient
/// viscous operator A acting on v is applied exactly in Fourier space; the
/// rest of rhs() is explicit:
///   u*      = E(dt) (u_n + dt N(u_n))
///   u_{n+1} = E(dt) (u_n + dt/2 N(u_n)) + dt/2 N(u*).
/// Steps whose advective Courant number exceeds `cfl` are split into equal
/// substeps.
class Integrator {
 public:
  Integrator(const Lattice& lattice, const PhysicalParams& params, bool dealias = true, double cfl = 0.5);
  ~Integrator();
  Integrator(const Integrator&) = delete;
  Integrator& operator=(const Integrator&) = delete;

  void load(const State& state);
  State state() const;
  /// Advances the loaded state by dt.  Throws BlowUpError.
  void step(double dt);
  /// N(u) for the loaded state (rhs without the viscous part).
  State nonlinear() const;
  /// Substeps taken by the last step() call.
  int last_substeps() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

State step(const State& state, const PhysicalParams& params, double dt, bool dealias = true);

struct SolverConfig {
  Lattice lattice{3, 32, 2.0 * kPi};
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_stride = 100;
  bool dealias = true;
  double cfl = 0.5;
};

struct SimulationResult {
  State final_state;
  double t = 0.0;
  long steps = 0;
  bool blew_up = false;
  std::string diagnostics;
};

/// Called at t = 0, after every snapshot_stride steps and at the end.
using Observer = std::function<void(long step, double t, const State& state)>;

/// Runs to t_end.  A blow-up stops the run; the result then holds the last
/// good state and the reason.
SimulationResult simulate(const SolverConfig& config, const PhysicalParams& params, const State& initial,
                          const Observer& observer = {});

/// Pointwise composition functions of the reformulated system.
/// K(a) = P'(1+a)/(1+a) - 1 = (1+a)^{gamma-2} - 1,  C(a) = a/(1+a).
double pressure_k(double a, double gamma);
double viscous_c(double a);

}  // namespace vdlab::visco
