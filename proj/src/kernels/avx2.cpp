#include "kernels_impl.hpp"

#if defined(VDLAB_HAVE_AVX2_TU)

#include <immintrin.h>

namespace vdlab::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

void mul_add(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(_mm256_loadu_pd(out.data() + i), p));
  }
  for (; i < n; ++i) out[i] += x[i] * y[i];
}

void mul_sub(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_sub_pd(_mm256_loadu_pd(out.data() + i), p));
  }
  for (; i < n; ++i) out[i] -= x[i] * y[i];
}

void mul(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  const std::size_t n = y.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x.data() + i));
    _mm256_storeu_pd(y.data() + i, _mm256_add_pd(_mm256_loadu_pd(y.data() + i), p));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// Complex arrays are interleaved (re, im); two coefficients per register.
// The symbol pair (s0, s1) is broadcast to (s0, s0, s1, s1).
inline __m256d duplicate_pairs(const double* s) {
  __m128d v = _mm_loadu_pd(s);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(v), 0b01010000);
}

void scale_by_symbol(std::span<cplx> c, std::span<const double> s) {
  const std::size_t n = c.size();
  auto* p = reinterpret_cast<double*>(c.data());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(p + 2 * i);
    _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(v, duplicate_pairs(s.data() + i)));
  }
  for (; i < n; ++i) c[i] = cplx(c[i].real() * s[i], c[i].imag() * s[i]);
}

// i*k*(re, im) = (-k*im, k*re): swap within each pair, multiply, flip the
// sign of the real slot.
void derivative(std::span<cplx> out, std::span<const cplx> in, std::span<const double> k) {
  const std::size_t n = out.size();
  const auto* src = reinterpret_cast<const double*>(in.data());
  auto* dst = reinterpret_cast<double*>(out.data());
  const __m256d sign = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_permute_pd(_mm256_loadu_pd(src + 2 * i), 0b0101);
    __m256d p = _mm256_mul_pd(v, duplicate_pairs(k.data() + i));
    _mm256_storeu_pd(dst + 2 * i, _mm256_xor_pd(p, sign));
  }
  for (; i < n; ++i) out[i] = cplx(-(k[i] * in[i].imag()), k[i] * in[i].real());
}

void derivative_add(std::span<cplx> out, std::span<const cplx> in, std::span<const double> k) {
  const std::size_t n = out.size();
  const auto* src = reinterpret_cast<const double*>(in.data());
  auto* dst = reinterpret_cast<double*>(out.data());
  const __m256d sign = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_permute_pd(_mm256_loadu_pd(src + 2 * i), 0b0101);
    __m256d p = _mm256_xor_pd(_mm256_mul_pd(v, duplicate_pairs(k.data() + i)), sign);
    _mm256_storeu_pd(dst + 2 * i, _mm256_add_pd(_mm256_loadu_pd(dst + 2 * i), p));
  }
  for (; i < n; ++i) {
    out[i] = cplx(out[i].real() - k[i] * in[i].imag(), out[i].imag() + k[i] * in[i].real());
  }
}

inline double horizontal_sum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

double sum_squares(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d v = _mm256_loadu_pd(x.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = horizontal_sum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double weighted_energy(std::span<const cplx> c, std::span<const double> w) {
  const std::size_t n = c.size();
  const auto* p = reinterpret_cast<const double*>(c.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(p + 2 * i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(duplicate_pairs(w.data() + i), _mm256_mul_pd(v, v)));
  }
  double s = horizontal_sum(acc);
  for (; i < n; ++i) s += w[i] * (c[i].real() * c[i].real() + c[i].imag() * c[i].imag());
  return s;
}

}  // namespace

const KernelTable kAvx2Table{
    "avx2", mul_add, mul_sub, mul, axpy, scale_by_symbol, derivative, derivative_add, sum_squares, weighted_energy,
};

}  // namespace vdlab::simd::detail

#endif
