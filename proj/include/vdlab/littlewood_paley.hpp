#pragma once

#include <limits>
#include <span>
#include <vector>

#include "vdlab/spectral_field.hpp"

namespace vdlab::lp {

/// Smooth radial step: 1 for r <= 3/4, 0 for r >= 4/3, built from the
/// e^{-1/x} mollifier profile.
double chi(double r);
/// Annulus bump phi(r) = chi(r/2) - chi(r), supported in [3/4, 8/3].
/// Telescoping gives chi(r) + sum_{q>=0} phi(2^{-q} r) = 1 for every r.
double phi(double r);

/// Sampled partition of unity for one lattice.
///
/// Homogeneous blocks run over q_min..q_max, the q whose annulus
/// 2^q (3/4, 8/3) contains a nonzero lattice frequency.  Inhomogeneous blocks
/// are q = -1 (chi) and q = 0..q_max.
///
/// Each mode meets at most two blocks, `lower` and `lower + 1`; only those
/// two weights are stored.
class DyadicPartition {
 public:
  explicit DyadicPartition(const Lattice& lattice);

  const Lattice& lattice() const { return lattice_; }
  int q_min() const { return q_min_; }
  int q_max() const { return q_max_; }

  /// phi(2^{-q} xi) at mode m.
  double weight(int q, std::size_t m) const;
  /// chi(xi) at mode m.
  double low_weight(std::size_t m) const { return chi_[m]; }

  /// Symbol of block q on every mode; q = -1 means chi when inhomogeneous.
  /// Zero outside the block range.
  RealVector block_symbol(int q, bool homogeneous) const;

  /// First block (homogeneous numbering) that may touch mode m.
  int lower_block(std::size_t m) const { return lower_[m]; }

 private:
  Lattice lattice_;
  int q_min_ = 0;
  int q_max_ = 0;
  std::vector<int> lower_;
  RealVector w_lower_;
  RealVector w_upper_;
  RealVector chi_;
};

DyadicPartition build_partition(const Lattice& lattice);

/// Largest |chi(xi) + sum_{q>=0} phi(2^{-q} xi) - 1| over the lattice modes
/// (and the homogeneous analogue over xi != 0), evaluated from chi and phi
/// directly rather than from the stored weights.
struct PartitionDeviation {
  double inhomogeneous = 0.0;
  double homogeneous = 0.0;
  std::size_t worst_mode = 0;
  double worst_radius = 0.0;
};

PartitionDeviation partition_deviation(const DyadicPartition& partition);

/// Delta_q f.  Out-of-range q gives the zero field.
SpectralField dyadic_block(const SpectralField& f, int q, const DyadicPartition& partition, bool homogeneous);

/// S_q f = sum_{k <= q-1} Delta_k f.
SpectralField low_cutoff(const SpectralField& f, int q, const DyadicPartition& partition, bool homogeneous);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Homogeneity { homogeneous, inhomogeneous };

struct BesovSpec {
  Homogeneity homogeneity = Homogeneity::homogeneous;
  double s = 0.0;
  double p = 2.0;
  double r = 1.0;
};

/// Two-regime norm: sum_{q <= threshold} 2^{q s_low} |Delta_q u|_{L^p_low}
///                + sum_{q >  threshold} 2^{q s_high} |Delta_q u|_{L^p_high}.
struct HybridSpec {
  double s_low = 0.0;
  double s_high = 0.0;
  int threshold = 0;
  double p_low = 2.0;
  double p_high = 2.0;
};

/// Fields whose pointwise Euclidean norm is measured (one component for a
/// scalar, dim for a vector, dim*dim for a matrix).
using Components = std::vector<const SpectralField*>;
Components components_of(const SpectralField& f);
Components components_of(const VectorField& v);
Components components_of(const MatrixField& m);

/// |Delta_q u|_{L^p} for every block in the range of the chosen homogeneity,
/// first entry for the lowest q.  p = 2 uses Parseval; other p transform
/// each block to physical space and use the midpoint rule.
std::vector<double> block_norms(const Components& u, double p, const DyadicPartition& partition, bool homogeneous);
/// Lowest block index of block_norms().
int first_block(const DyadicPartition& partition, bool homogeneous);

double besov_norm(const Components& u, const BesovSpec& spec, const DyadicPartition& partition);
double hybrid_norm(const Components& u, const HybridSpec& spec, const DyadicPartition& partition);

template <class Field>
double besov_norm(const Field& f, const BesovSpec& spec, const DyadicPartition& partition) {
  return besov_norm(components_of(f), spec, partition);
}
template <class Field>
double hybrid_norm(const Field& f, const HybridSpec& spec, const DyadicPartition& partition) {
  return hybrid_norm(components_of(f), spec, partition);
}

/// sum_q 2^{qs} (int_0^T |Delta_q u(t)|^r_{L^p} dt)^{1/r} with the trapezoid
/// rule on the snapshot times (r = infinity takes the blockwise sup).  The
/// block sum uses spec.r as its exponent.
double chemin_lerner_norm(std::span<const SpectralField> snapshots, std::span<const double> times, double r,
                          const BesovSpec& spec, const DyadicPartition& partition);

/// l^r norm of a sequence (r = infinity allowed), summed in index order.
double sequence_norm(std::span<const double> terms, double r);

}  // namespace vdlab::lp
