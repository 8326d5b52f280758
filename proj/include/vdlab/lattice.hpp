#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>

#include "vdlab/common.hpp"

namespace vdlab {

using Wavevector = std::array<double, 3>;

/// Periodic box [0, L)^dim sampled at N points per axis (N a power of two,
/// N >= 8).  Grid and spectral arrays are row-major with axis 0 slowest.
///
/// Frequencies are xi = (2*pi/L) * k with k in [-N/2, N/2].  The Nyquist
/// index N/2 is read as +N/2 by even (radial) symbols and as 0 by the odd
/// derivative symbols, which keeps derivatives of real fields real.
///
/// Lattice is a cheap value type; its frequency tables are shared.
class Lattice {
 public:
  Lattice(int dim, int points_per_dim, double period);

  int dim() const { return dim_; }
  int points() const { return points_; }
  double period() const { return period_; }
  std::size_t size() const { return size_; }
  double spacing() const { return period_ / points_; }
  double cell_volume() const;
  double volume() const;
  /// 2*pi/L, the smallest nonzero |xi|.
  double fundamental() const { return 2.0 * kPi / period_; }
  /// Largest |xi| present on the lattice (corner mode).
  double max_frequency() const;

  /// Integer frequency of an axis index: i for i <= N/2, i - N otherwise.
  int signed_index(int i) const { return i <= points_ / 2 ? i : i - points_; }
  std::array<int, 3> axis_indices(std::size_t flat) const;
  std::size_t flat_index(const std::array<int, 3>& idx) const;
  /// Flat index of the mode -k.
  std::size_t mirror(std::size_t flat) const;
  bool is_nyquist(std::size_t flat) const;

  Wavevector wavevector(std::size_t flat) const;
  double magnitude(std::size_t flat) const { return tables_->magnitude[flat]; }
  /// |xi| of every mode, spectral layout.
  std::span<const double> magnitudes() const { return tables_->magnitude; }
  /// Derivative wavenumber along an axis for every mode (Nyquist -> 0).
  std::span<const double> derivative_wavenumbers(int axis) const { return tables_->derivative[axis]; }

  bool operator==(const Lattice& other) const {
    return dim_ == other.dim_ && points_ == other.points_ && period_ == other.period_;
  }

 private:
  struct Tables {
    RealVector magnitude;
    std::array<RealVector, 3> derivative;
  };

  int dim_;
  int points_;
  double period_;
  std::size_t size_;
  std::shared_ptr<const Tables> tables_;
};

/// Throws InputError unless both lattices are identical.
void require_same_lattice(const Lattice& a, const Lattice& b, const char* what);

}  // namespace vdlab
