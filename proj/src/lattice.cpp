#include "vdlab/lattice.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace vdlab {

Lattice::Lattice(int dim, int points_per_dim, double period) : dim_(dim), points_(points_per_dim), period_(period) {
  if (dim != 2 && dim != 3) throw InputError("lattice dimension must be 2 or 3, got " + std::to_string(dim));
  if (points_per_dim < 8 || !std::has_single_bit(static_cast<unsigned>(points_per_dim))) {
    throw InputError("points per dimension must be a power of two >= 8, got " + std::to_string(points_per_dim));
  }
  if (!(period > 0.0) || !std::isfinite(period)) throw InputError("lattice period must be positive and finite");

  size_ = 1;
  for (int d = 0; d < dim_; ++d) size_ *= static_cast<std::size_t>(points_);

  auto tables = std::make_shared<Tables>();
  tables->magnitude.resize(size_);
  for (auto& t : tables->derivative) t.assign(size_, 0.0);

  const double k0 = fundamental();
  for (std::size_t flat = 0; flat < size_; ++flat) {
    const auto idx = axis_indices(flat);
    double r2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      const int k = signed_index(idx[d]);
      r2 += (k0 * k) * (k0 * k);
      tables->derivative[d][flat] = (2 * idx[d] == points_) ? 0.0 : k0 * k;
    }
    tables->magnitude[flat] = std::sqrt(r2);
  }
  tables_ = std::move(tables);
}

double Lattice::cell_volume() const { return std::pow(spacing(), dim_); }

double Lattice::volume() const { return std::pow(period_, dim_); }

double Lattice::max_frequency() const { return fundamental() * (points_ / 2) * std::sqrt(static_cast<double>(dim_)); }

std::array<int, 3> Lattice::axis_indices(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

std::size_t Lattice::flat_index(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) {
    const int i = ((idx[d] % points_) + points_) % points_;
    flat = flat * points_ + static_cast<std::size_t>(i);
  }
  return flat;
}

std::size_t Lattice::mirror(std::size_t flat) const {
  auto idx = axis_indices(flat);
  for (int d = 0; d < dim_; ++d) idx[d] = -idx[d];
  return flat_index(idx);
}

bool Lattice::is_nyquist(std::size_t flat) const {
  const auto idx = axis_indices(flat);
  for (int d = 0; d < dim_; ++d) {
    if (2 * idx[d] == points_) return true;
  }
  return false;
}

Wavevector Lattice::wavevector(std::size_t flat) const {
  const auto idx = axis_indices(flat);
  Wavevector xi{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) xi[d] = fundamental() * signed_index(idx[d]);
  return xi;
}

void require_same_lattice(const Lattice& a, const Lattice& b, const char* what) {
  if (!(a == b)) throw InputError(std::string("lattice mismatch in ") + what);
}

}  // namespace vdlab
