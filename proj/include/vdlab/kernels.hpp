#pragma once

// Data-parallel inner loops shared by the spectral operators and the solver.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant.  The active table is picked once at startup from the CPU feature
// bits; VDLAB_SIMD=scalar (or =avx2) in the environment overrides the choice.
//
// Elementwise kernels never fuse multiply-add, so both variants round the
// same way and agree bit for bit.  Reductions use four partial sums in the
// AVX2 variant and therefore agree with the scalar sum only to rounding.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace vdlab::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  /// out[i] += x[i] * y[i]
  void (*mul_add)(std::span<double> out, std::span<const double> x, std::span<const double> y);
  /// out[i] -= x[i] * y[i]
  void (*mul_sub)(std::span<double> out, std::span<const double> x, std::span<const double> y);
  /// out[i] = x[i] * y[i]
  void (*mul)(std::span<double> out, std::span<const double> x, std::span<const double> y);
  /// y[i] += a * x[i]
  void (*axpy)(std::span<double> y, double a, std::span<const double> x);
  /// c[i] *= s[i]  (complex coefficients, real symbol)
  void (*scale_by_symbol)(std::span<cplx> c, std::span<const double> s);
  /// out[i] = i * k[i] * in[i]  (spectral derivative)
  void (*derivative)(std::span<cplx> out, std::span<const cplx> in, std::span<const double> k);
  /// out[i] += i * k[i] * in[i]
  void (*derivative_add)(std::span<cplx> out, std::span<const cplx> in, std::span<const double> k);
  /// sum x[i]^2
  double (*sum_squares)(std::span<const double> x);
  /// sum w[i] * |c[i]|^2
  double (*weighted_energy)(std::span<const cplx> c, std::span<const double> w);
};

const KernelTable& scalar_kernels();

/// Null when the binary or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Table selected for this process.
const KernelTable& active();

}  // namespace vdlab::simd
