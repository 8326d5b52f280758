#include "kernels_impl.hpp"

namespace vdlab::simd::detail {
namespace {

void mul_add(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += x[i] * y[i];
}

void mul_sub(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= x[i] * y[i];
}

void mul(std::span<double> out, std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void scale_by_symbol(std::span<cplx> c, std::span<const double> s) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx(c[i].real() * s[i], c[i].imag() * s[i]);
}

void derivative(std::span<cplx> out, std::span<const cplx> in, std::span<const double> k) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cplx(-(k[i] * in[i].imag()), k[i] * in[i].real());
}

void derivative_add(std::span<cplx> out, std::span<const cplx> in, std::span<const double> k) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = cplx(out[i].real() - k[i] * in[i].imag(), out[i].imag() + k[i] * in[i].real());
  }
}

double sum_squares(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double weighted_energy(std::span<const cplx> c, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s += w[i] * (c[i].real() * c[i].real() + c[i].imag() * c[i].imag());
  }
  return s;
}

}  // namespace

const KernelTable kScalarTable{
    "scalar", mul_add, mul_sub, mul, axpy, scale_by_symbol, derivative, derivative_add, sum_squares, weighted_energy,
};

}  // namespace vdlab::simd::detail
