#include "vdlab/half_spectrum.hpp"

#include <cmath>
#include <cstdint>

#include "vdlab/fft.hpp"
#include "vdlab/spectral_field.hpp"

namespace vdlab {
namespace {

bool aligned(const double* p) { return reinterpret_cast<std::uintptr_t>(p) % 64 == 0; }

}  // namespace

void expand_half_spectrum(const Lattice& lattice, std::span<const cplx> half, std::span<cplx> full) {
  const int n = lattice.points();
  const int nh = n / 2 + 1;
  const std::size_t rows = lattice.size() / n;
  for (std::size_t row = 0; row < rows; ++row) {
    for (int k = 0; k < nh; ++k) full[row * n + k] = half[row * nh + k];
  }
  for (std::size_t row = 0; row < rows; ++row) {
    for (int k = nh; k < n; ++k) {
      const std::size_t flat = row * n + k;
      full[flat] = std::conj(full[lattice.mirror(flat)]);
    }
  }
}

HalfSpectrum::HalfSpectrum(const Lattice& lattice)
    : lattice_(lattice),
      size_(lattice.size() / lattice.points() * (lattice.points() / 2 + 1)),
      scale_(1.0 / std::sqrt(static_cast<double>(lattice.size()))),
      magnitude_(size_),
      mask_(size_),
      weight_(size_),
      scratch_(size_),
      real_scratch_(lattice.size()) {
  const int n = lattice.points();
  const int nh = n / 2 + 1;
  const int cutoff = n / 3;
  for (int d = 0; d < lattice.dim(); ++d) derivative_[d].resize(size_);
  for (std::size_t h = 0; h < size_; ++h) {
    const std::size_t row = h / nh;
    const int last = static_cast<int>(h % nh);
    const std::size_t flat = row * n + last;
    const auto idx = lattice.axis_indices(flat);
    bool keep = true;
    for (int d = 0; d < lattice.dim(); ++d) {
      derivative_[d][h] = lattice.derivative_wavenumbers(d)[flat];
      keep = keep && std::abs(lattice.signed_index(idx[d])) <= cutoff;
    }
    magnitude_[h] = lattice.magnitude(flat);
    mask_[h] = keep ? 1.0 : 0.0;
    weight_[h] = (last == 0 || 2 * last == n) ? 1.0 : 2.0;
  }
}

ComplexVector HalfSpectrum::restrict(const SpectralField& f) const {
  require_same_lattice(lattice_, f.lattice(), "half-spectrum restriction");
  const int n = lattice_.points();
  const int nh = n / 2 + 1;
  ComplexVector half(size_);
  for (std::size_t h = 0; h < size_; ++h) half[h] = f[(h / nh) * n + h % nh];
  return half;
}

SpectralField HalfSpectrum::expand(std::span<const cplx> half) const {
  SpectralField f(lattice_, true);
  expand_half_spectrum(lattice_, half, f.coeffs());
  return f;
}

void HalfSpectrum::forward(std::span<const double> physical, std::span<cplx> half) const {
  const auto& plans = FftPlans::for_lattice(lattice_);
  // r2c leaves its input intact, so aligned input is transformed in place of
  // the scratch copy (same alignment as the planning arrays, same results).
  const double* in = physical.data();
  if (!aligned(in)) {
    std::copy(physical.begin(), physical.end(), real_scratch_.begin());
    in = real_scratch_.data();
  }
  plans.forward_real(in, scratch_.data());
  for (std::size_t h = 0; h < size_; ++h) half[h] = scratch_[h] * scale_;
}

void HalfSpectrum::inverse(std::span<const cplx> half, std::span<double> physical) const {
  const auto& plans = FftPlans::for_lattice(lattice_);
  for (std::size_t h = 0; h < size_; ++h) scratch_[h] = half[h] * scale_;
  if (aligned(physical.data())) {
    plans.backward_real(scratch_.data(), physical.data());
    return;
  }
  plans.backward_real(scratch_.data(), real_scratch_.data());
  std::copy(real_scratch_.begin(), real_scratch_.end(), physical.begin());
}

}  // namespace vdlab
