#pragma once

#include <span>

#include "vdlab/common.hpp"
#include "vdlab/lattice.hpp"

namespace vdlab {

class SpectralField;

/// Real-field spectra stored in the r2c layout: the last axis keeps only the
/// indices 0..N/2, the rest follows from c(-xi) = conj(c(xi)).  The solver
/// works in this layout to halve transform and multiplier cost.
///
/// Not thread-safe: inverse() uses a scratch buffer owned by the object.
class HalfSpectrum {
 public:
  explicit HalfSpectrum(const Lattice& lattice);

  const Lattice& lattice() const { return lattice_; }
  std::size_t size() const { return size_; }

  std::span<const double> magnitudes() const { return magnitude_; }
  std::span<const double> derivative_wavenumbers(int axis) const { return derivative_[axis]; }
  std::span<const double> dealias_mask() const { return mask_; }
  /// 1 on the self-conjugate columns (last index 0 and N/2), 2 elsewhere, so
  /// that sum w|c|^2 equals the full-spectrum sum.
  std::span<const double> parseval_weights() const { return weight_; }

  ComplexVector restrict(const SpectralField& f) const;
  SpectralField expand(std::span<const cplx> half) const;

  /// Unitary transforms (same normalization as dft_forward / dft_inverse).
  void forward(std::span<const double> physical, std::span<cplx> half) const;
  void inverse(std::span<const cplx> half, std::span<double> physical) const;

 private:
  Lattice lattice_;
  std::size_t size_;
  double scale_;
  RealVector magnitude_;
  RealVector derivative_[3];
  RealVector mask_;
  RealVector weight_;
  mutable ComplexVector scratch_;
  mutable RealVector real_scratch_;
};

/// Copies the half spectrum into a full array and fills the mirrored half.
void expand_half_spectrum(const Lattice& lattice, std::span<const cplx> half, std::span<cplx> full);

}  // namespace vdlab
