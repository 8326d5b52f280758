#pragma once

#include <fftw3.h>

#include "vdlab/lattice.hpp"

namespace vdlab {

/// FFTW plans for one lattice shape, created once with FFTW_ESTIMATE (so the
/// chosen algorithm, and hence every rounding, is reproducible run to run)
/// and shared process-wide.  Execution is thread-safe; arrays must be
/// 64-byte aligned like the ones the plans were made with.
///
/// All transforms here are unnormalized; callers apply N^{-dim/2}.
class FftPlans {
 public:
  static const FftPlans& for_lattice(const Lattice& lattice);

  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  /// sum_x f(x) e^{-i xi.x}
  void forward(const cplx* in, cplx* out) const;
  /// sum_xi c(xi) e^{+i xi.x}
  void backward(const cplx* in, cplx* out) const;
  /// Real input to the N x ... x (N/2+1) half spectrum.
  void forward_real(const double* in, cplx* out) const;
  /// Half spectrum to real output.  Overwrites `in`.
  void backward_real(cplx* in, double* out) const;

  std::size_t half_size() const { return half_size_; }

 private:
  FftPlans(int dim, int points);

  std::size_t half_size_;
  fftw_plan forward_{};
  fftw_plan backward_{};
  fftw_plan forward_real_{};
  fftw_plan backward_real_{};
};

}  // namespace vdlab
