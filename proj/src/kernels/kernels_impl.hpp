#pragma once

#include "vdlab/kernels.hpp"

namespace vdlab::simd::detail {

extern const KernelTable kScalarTable;

#if defined(VDLAB_HAVE_AVX2_TU)
extern const KernelTable kAvx2Table;
#endif

}  // namespace vdlab::simd::detail
