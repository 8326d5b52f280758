#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "vdlab/littlewood_paley.hpp"
#include "vdlab/spectral_field.hpp"

namespace vdlab::green {

/// Coefficients of the linear pair
///   c_t + alpha Lambda u = 0,   u_t - kappa Delta u - beta Lambda c = 0,
/// which in Fourier space reads c' = -alpha r u, u' = beta r c - kappa r^2 u.
struct GreenParams {
  double alpha = 1.0;
  double beta = 1.0;
  double kappa = 1.0;

  /// InputError unless all three are positive and finite.
  void validate() const;
  /// |xi| where the two eigenvalues merge: 2 sqrt(alpha beta) / kappa.
  double degenerate_radius() const;
};

struct EigenPair {
  cplx lambda_plus;
  cplx lambda_minus;
  bool degenerate = false;
};

inline constexpr double kDegenerateTolerance = 1e-10;

/// Roots of lambda^2 + kappa r^2 lambda + alpha beta r^2 = 0.  For real roots
/// the smaller-magnitude one comes from Vieta (alpha beta r^2 / lambda_-),
/// which avoids the cancellation in -kappa r^2/2 + sqrt(...)/2.
EigenPair eigenvalues(const GreenParams& params, double xi_mag);

/// Fourier-side solution operator exp(t A) with
/// A = [[0, -alpha r], [beta r, -kappa r^2]].
///
/// Entries are assembled from E = (e+ + e-)/2 and Phi = (e+ - e-)/(l+ - l-):
/// G11 = E - m Phi, G22 = E + m Phi, G12 = -alpha r Phi, G21 = +beta r Phi,
/// with m = -kappa r^2/2.  Near the double root Phi and E come from their
/// power series in z = (l+ - l-)^2 t^2 / 4.
struct GreenMatrix {
  std::array<std::array<double, 2>, 2> g{};
  /// Largest imaginary part discarded during the complex assembly.
  double imag_residue = 0.0;

  double operator()(int i, int j) const { return g[i][j]; }
  double max_abs() const;
  double det() const { return g[0][0] * g[1][1] - g[0][1] * g[1][0]; }
};

GreenMatrix green_hat(const GreenParams& params, double xi_mag, double t);

/// Multiplies every mode of (c, u) by green_hat(|xi|, t).
std::pair<SpectralField, SpectralField> apply_semigroup(const GreenParams& params, const SpectralField& c,
                                                        const SpectralField& u, double t);

/// beta |c|^2 + alpha |u|^2, the energy the semigroup dissipates.
double semigroup_energy(const GreenParams& params, const SpectralField& c, const SpectralField& u);

struct BandDecayTable {
  std::vector<double> times;
  int first_q = 0;
  /// norms[i][k]: |G(t_i) Delta_{first_q + k} (c, u)|_{L^2}
  std::vector<std::vector<double>> norms;
  /// sum over q <= R of the band norms, per time.
  std::vector<double> low_sum;
};

BandDecayTable band_decay_curve(const GreenParams& params, const SpectralField& c, const SpectralField& u,
                                std::span<const double> times, const lp::DyadicPartition& partition, int R);

/// Radial Fourier profile (c_hat(r), u_hat(r)) of rotation-invariant data.
using RadialProfile = std::function<std::array<double, 2>(double)>;

struct RadialOptions {
  double r_cut = 16.0;
  double rel_tol = 1e-9;
  /// Extra breakpoints (e.g. the edges of a compactly supported profile).
  std::vector<double> breakpoints;
};

/// |G(t) U0|_{L^2(R^dim)} with U0 given by its unitary Fourier transform:
/// sqrt(|S^{dim-1}| int_0^{r_cut} |G_hat(r, t) p(r)|^2 r^{dim-1} dr).
double radial_decay_quadrature(const GreenParams& params, const RadialProfile& profile, int dim, double t,
                               const RadialOptions& options = {});

struct BoundFit {
  double theta = 0.0;
  double worst_xi = 0.0;
  double worst_t = 0.0;
};

struct BoundGrid {
  int xi_points = 200;
  int t_points = 200;
  double t_min = 1e-3;
  double t_max = 1e3;
  double constant = 2.0;
};

/// Largest theta with max_ij |G_ij(r, t)| <= C e^{-theta r^2 t} on the grid
/// r in (0, R] (uniform) x t in [t_min, t_max] (log-spaced).  RuntimeError
/// when no positive theta exists.
BoundFit pointwise_bound_fit(const GreenParams& params, double R, const BoundGrid& grid = {});

struct SumBoundRow {
  double t = 0.0;
  double S = 0.0;
  double I = 0.0;
  double II = 0.0;
  double III = 0.0;
};

/// S(t) = sum_{q <= R} e^{-(2/9) 4^q t theta} (1 - e^{-(20/3) 4^q t theta})^{1/2}
/// split with k = -q into I (k = -R..0), II (k = 1..K) and III (k > K, with
/// K = floor(log_4((20/3) t theta))).  III is summed until its terms fall
/// below 1e-18 of the running total.
std::vector<SumBoundRow> sum_bound_scan(double theta, int R, std::span<const double> times);

/// Unit-sphere area in R^dim (2 pi for dim 2, 4 pi for dim 3).
double sphere_area(int dim);

}  // namespace vdlab::green
