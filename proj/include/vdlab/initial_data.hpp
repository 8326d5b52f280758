#pragma once

#include <string>

#include "vdlab/green.hpp"
#include "vdlab/solver.hpp"

namespace vdlab::data {

/// Canonical initial-data families.
///   gaussian: U0_hat(xi) = A e^{-|xi|^2}, nonzero and bounded at xi = 0.
///   annulus:  U0_hat(xi) = A phi(|xi|), the Littlewood-Paley bump of block 0
///             (band limited to 3/4 <= |xi| <= 8/3).
///   l1-bump:  U0(x) = A (1 - |x|^2)^6 on |x| < 1, compactly supported; its
///             radial transform is computed by Gauss-Legendre quadrature and
///             decays like |xi|^{-8} (3D), so a cutoff of 16 loses nothing.
/// Transforms are unitary: f_hat(xi) = (2 pi)^{-n/2} int f(x) e^{-i xi.x} dx.
enum class Family { gaussian, annulus, l1_bump };

/// InputError for unknown names.
Family parse_family(const std::string& name);
std::string family_name(Family family);

/// U0_hat(r) for a family in dimension 2 or 3.
double radial_transform(Family family, double amplitude, int dim, double r);

/// Both components (c, u) of the linear pair carry the same profile.
green::RadialProfile radial_profile(Family family, double amplitude, int dim);

/// Lattice sampling of the whole-space data, periodized on the box:
/// c(xi) = N^{n/2} (2 pi)^{n/2} / L^n * U0_hat(xi), so that the box L^2
/// norm is the Riemann sum of int |U0_hat|^2.
SpectralField lattice_field(Family family, double amplitude, const Lattice& lattice);

/// Nonlinear initial state: displacement psi^i = s_i g and velocity
/// v^i = s_i g with g the family field scaled to max |grad g| = amplitude,
/// signs s = (+1, -1, +1), zero mean velocity.  Built with
/// init_from_displacement, so the compatibility constraints hold.
visco::State nonlinear_state(Family family, double amplitude, const Lattice& lattice);

}  // namespace vdlab::data
