#pragma once

// Shared helpers for the unit and acceptance suites: seeded generators for
// random fields and a direct O(N^2) discrete Fourier transform used as an
// independent oracle for the FFT-backed code.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "vdlab/spectral_field.hpp"

namespace vdlab::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline RealVector random_grid(const Lattice& lattice, Rng& rng) {
  RealVector x(lattice.size());
  for (auto& v : x) v = uniform(rng, -1.0, 1.0);
  return x;
}

/// Random real field.  Nyquist modes are removed so odd symbols (derivatives)
/// and even symbols (|xi|) see the same frequencies; optionally zero mean and
/// limited to |k_i| <= kmax.
inline SpectralField random_field(const Lattice& lattice, Rng& rng, bool zero_mean = true, int kmax = -1) {
  SpectralField f = dft_forward(random_grid(lattice, rng), lattice);
  for (std::size_t m = 0; m < f.size(); ++m) {
    bool drop = lattice.is_nyquist(m);
    if (kmax >= 0) {
      const auto idx = lattice.axis_indices(m);
      for (int d = 0; d < lattice.dim(); ++d) drop = drop || std::abs(lattice.signed_index(idx[d])) > kmax;
    }
    if (drop) f[m] = 0.0;
  }
  if (zero_mean) f[0] = 0.0;
  return f;
}

inline VectorField random_vector(const Lattice& lattice, Rng& rng, bool zero_mean = true, int kmax = -1) {
  std::vector<SpectralField> c;
  for (int i = 0; i < lattice.dim(); ++i) c.push_back(random_field(lattice, rng, zero_mean, kmax));
  return VectorField(std::move(c));
}

/// c(k) = N^{-dim/2} sum_x f(x) exp(-i xi.x), summed directly.
inline std::vector<std::complex<double>> direct_dft(const Lattice& lattice, const std::vector<std::complex<double>>& f,
                                                    int sign = -1) {
  const std::size_t n = lattice.size();
  const int N = lattice.points();
  std::vector<std::complex<long double>> twiddle(N);
  for (int j = 0; j < N; ++j) {
    const long double ang = sign * 2.0L * 3.141592653589793238462643383279502884L * j / N;
    twiddle[j] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<std::complex<double>> out(n);
  const long double s = 1.0L / std::sqrt(static_cast<long double>(n));
  for (std::size_t m = 0; m < n; ++m) {
    const auto km = lattice.axis_indices(m);
    std::complex<long double> acc = 0.0L;
    for (std::size_t x = 0; x < n; ++x) {
      const auto ix = lattice.axis_indices(x);
      long long phase = 0;
      for (int d = 0; d < lattice.dim(); ++d) phase += static_cast<long long>(km[d]) * ix[d];
      acc += std::complex<long double>(f[x].real(), f[x].imag()) * twiddle[phase % N];
    }
    out[m] = std::complex<double>(static_cast<double>(acc.real() * s), static_cast<double>(acc.imag() * s));
  }
  return out;
}

inline double max_abs_diff(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b) {
  double mx = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::abs(a[i] - b[i]));
  return mx;
}

inline double max_abs(std::span<const std::complex<double>> a) {
  double mx = 0.0;
  for (auto z : a) mx = std::max(mx, std::abs(z));
  return mx;
}

inline double max_abs(std::span<const double> a) {
  double mx = 0.0;
  for (auto z : a) mx = std::max(mx, std::abs(z));
  return mx;
}

/// Single Fourier mode exp(i k.x) as a complex field (not hermitian).
inline SpectralField plane_wave(const Lattice& lattice, std::array<int, 3> k) {
  SpectralField f(lattice, false);
  f[lattice.flat_index(k)] = 1.0;
  return f;
}

/// cos(k.x) as a real field.
inline SpectralField cosine_wave(const Lattice& lattice, std::array<int, 3> k) {
  SpectralField f(lattice, true);
  std::array<int, 3> mk{-k[0], -k[1], -k[2]};
  f[lattice.flat_index(k)] += 0.5 * std::sqrt(static_cast<double>(lattice.size()));
  f[lattice.flat_index(mk)] += 0.5 * std::sqrt(static_cast<double>(lattice.size()));
  return f;
}

}  // namespace vdlab::test
