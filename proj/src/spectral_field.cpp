#include "vdlab/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vdlab/fft.hpp"
#include "vdlab/half_spectrum.hpp"
#include "vdlab/kernels.hpp"

namespace vdlab {
namespace {

double unitary_scale(const Lattice& lattice) { return 1.0 / std::sqrt(static_cast<double>(lattice.size())); }

std::span<const double> as_doubles(std::span<const cplx> c) {
  return {reinterpret_cast<const double*>(c.data()), 2 * c.size()};
}

}  // namespace

SpectralField::SpectralField(Lattice lattice, bool hermitian)
    : lattice_(std::move(lattice)), coeffs_(lattice_.size(), cplx(0.0, 0.0)), hermitian_(hermitian) {}

SpectralField::SpectralField(Lattice lattice, ComplexVector coeffs, bool hermitian)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)), hermitian_(hermitian) {
  if (coeffs_.size() != lattice_.size()) {
    throw InputError("coefficient count " + std::to_string(coeffs_.size()) + " does not match lattice size " +
                     std::to_string(lattice_.size()));
  }
}

double SpectralField::hermitian_defect() const {
  double scale = 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    scale = std::max(scale, std::abs(coeffs_[i]));
    defect = std::max(defect, std::abs(coeffs_[lattice_.mirror(i)] - std::conj(coeffs_[i])));
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_lattice(lattice_, other.lattice_, "field addition");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_lattice(lattice_, other.lattice_, "field subtraction");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

VectorField::VectorField(const Lattice& lattice) : components_(lattice.dim(), SpectralField(lattice)) {}

VectorField::VectorField(std::vector<SpectralField> components) : components_(std::move(components)) {
  if (components_.empty()) throw InputError("vector field needs components");
  const Lattice& lat = components_.front().lattice();
  if (static_cast<int>(components_.size()) != lat.dim()) throw InputError("vector field needs dim components");
  for (const auto& c : components_) require_same_lattice(lat, c.lattice(), "vector field");
}

MatrixField::MatrixField(const Lattice& lattice)
    : dim_(lattice.dim()), components_(lattice.dim() * lattice.dim(), SpectralField(lattice)) {}

MatrixField::MatrixField(std::vector<SpectralField> row_major_components)
    : dim_(0), components_(std::move(row_major_components)) {
  if (components_.empty()) throw InputError("matrix field needs components");
  const Lattice& lat = components_.front().lattice();
  dim_ = lat.dim();
  if (static_cast<int>(components_.size()) != dim_ * dim_) throw InputError("matrix field needs dim*dim components");
  for (const auto& c : components_) require_same_lattice(lat, c.lattice(), "matrix field");
}

MatrixField MatrixField::transposed() const {
  MatrixField t(lattice());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t(i, j) = (*this)(j, i);
  return t;
}

SpectralField dft_forward(std::span<const double> physical, const Lattice& lattice) {
  if (physical.size() != lattice.size()) {
    throw InputError("physical array has " + std::to_string(physical.size()) + " values, lattice expects " +
                     std::to_string(lattice.size()));
  }
  const auto& plans = FftPlans::for_lattice(lattice);
  RealVector in(physical.begin(), physical.end());
  ComplexVector half(plans.half_size());
  plans.forward_real(in.data(), half.data());
  const double s = unitary_scale(lattice);
  for (auto& c : half) c *= s;
  SpectralField f(lattice, true);
  expand_half_spectrum(lattice, half, f.coeffs());
  return f;
}

SpectralField dft_forward_complex(std::span<const cplx> physical, const Lattice& lattice) {
  if (physical.size() != lattice.size()) {
    throw InputError("physical array has " + std::to_string(physical.size()) + " values, lattice expects " +
                     std::to_string(lattice.size()));
  }
  const auto& plans = FftPlans::for_lattice(lattice);
  ComplexVector in(physical.begin(), physical.end());
  ComplexVector out(lattice.size());
  plans.forward(in.data(), out.data());
  const double s = unitary_scale(lattice);
  for (auto& c : out) c *= s;
  bool real = std::all_of(physical.begin(), physical.end(), [](cplx z) { return z.imag() == 0.0; });
  return SpectralField(lattice, std::move(out), real);
}

RealVector dft_inverse(const SpectralField& f) {
  if (!f.hermitian()) throw InputError("real inverse transform of a non-hermitian field");
  const Lattice& lattice = f.lattice();
  const auto& plans = FftPlans::for_lattice(lattice);
  const int n = lattice.points();
  const int nh = n / 2 + 1;
  const std::size_t rows = lattice.size() / n;
  ComplexVector half(plans.half_size());
  for (std::size_t row = 0; row < rows; ++row) {
    for (int k = 0; k < nh; ++k) half[row * nh + k] = f[row * n + k];
  }
  RealVector out(lattice.size());
  plans.backward_real(half.data(), out.data());
  const double s = unitary_scale(lattice);
  for (auto& x : out) x *= s;
  return out;
}

ComplexVector dft_inverse_complex(const SpectralField& f) {
  const Lattice& lattice = f.lattice();
  const auto& plans = FftPlans::for_lattice(lattice);
  ComplexVector out(lattice.size());
  plans.backward(f.coeffs().data(), out.data());
  const double s = unitary_scale(lattice);
  for (auto& z : out) z *= s;
  return out;
}

SpectralField apply_multiplier(const SpectralField& f, const Symbol& symbol) {
  const Lattice& lattice = f.lattice();
  const std::size_t n = lattice.size();
  ComplexVector sigma(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = symbol(lattice.wavevector(i));
    if (i == 0 && !(std::isfinite(s.real()) && std::isfinite(s.imag()))) s = 0.0;
    sigma[i] = s;
    scale = std::max(scale, std::abs(s));
  }

  bool hermitian = f.hermitian();
  for (std::size_t i = 0; hermitian && i < n; ++i) {
    if (std::abs(sigma[lattice.mirror(i)] - std::conj(sigma[i])) > 1e-13 * scale) hermitian = false;
  }

  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f[i] * sigma[i];
  return SpectralField(lattice, std::move(out), hermitian);
}

SpectralField apply_real_symbol(const SpectralField& f, std::span<const double> values) {
  if (values.size() != f.size()) throw InputError("symbol table size does not match the lattice");
  SpectralField out = f;
  simd::active().scale_by_symbol(out.coeffs(), values);
  return out;
}

SpectralField lambda_power(const SpectralField& f, double s) {
  const auto mag = f.lattice().magnitudes();
  RealVector values(mag.size());
  for (std::size_t i = 0; i < mag.size(); ++i) values[i] = std::pow(mag[i], s);
  values[0] = (s == 0.0) ? 1.0 : 0.0;
  return apply_real_symbol(f, values);
}

SpectralField partial(const SpectralField& f, int axis) {
  SpectralField out(f.lattice(), f.hermitian());
  simd::active().derivative(out.coeffs(), f.coeffs(), f.lattice().derivative_wavenumbers(axis));
  return out;
}

VectorField gradient(const SpectralField& f) {
  std::vector<SpectralField> comps;
  for (int d = 0; d < f.lattice().dim(); ++d) comps.push_back(partial(f, d));
  return VectorField(std::move(comps));
}

SpectralField riesz(const SpectralField& g, int axis) {
  const auto mag = g.lattice().magnitudes();
  const auto k = g.lattice().derivative_wavenumbers(axis);
  RealVector table(mag.size());
  table[0] = 0.0;
  for (std::size_t i = 1; i < mag.size(); ++i) table[i] = k[i] / mag[i];
  SpectralField out(g.lattice(), g.hermitian());
  simd::active().derivative(out.coeffs(), g.coeffs(), table);
  return out;
}

SpectralField riesz_hessian(const SpectralField& g, int i, int j) {
  const auto mag = g.lattice().magnitudes();
  const auto ki = g.lattice().derivative_wavenumbers(i);
  const auto kj = g.lattice().derivative_wavenumbers(j);
  RealVector table(mag.size());
  table[0] = 0.0;
  for (std::size_t m = 1; m < mag.size(); ++m) table[m] = -(ki[m] * kj[m]) / mag[m];
  return apply_real_symbol(g, table);
}

SpectralField leray_div(const VectorField& v) {
  SpectralField d = riesz(v[0], 0);
  for (int i = 1; i < v.size(); ++i) d += riesz(v[i], i);
  return d;
}

MatrixField leray_curl(const VectorField& v) {
  const int n = v.size();
  MatrixField omega(v.lattice());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      SpectralField w = riesz(v[i], j) - riesz(v[j], i);
      omega(j, i) = -1.0 * w;
      omega(i, j) = std::move(w);
    }
  }
  return omega;
}

RealVector dealias_mask(const Lattice& lattice) {
  RealVector mask(lattice.size());
  const int cutoff = lattice.points() / 3;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const auto idx = lattice.axis_indices(i);
    bool keep = true;
    for (int d = 0; d < lattice.dim(); ++d) keep = keep && std::abs(lattice.signed_index(idx[d])) <= cutoff;
    mask[i] = keep ? 1.0 : 0.0;
  }
  return mask;
}

SpectralField dealias(const SpectralField& f) { return apply_real_symbol(f, dealias_mask(f.lattice())); }

double l2_norm(const SpectralField& f) {
  return std::sqrt(f.lattice().cell_volume() * simd::active().sum_squares(as_doubles(f.coeffs())));
}

double l2_norm(const VectorField& v) {
  double sum = 0.0;
  for (int i = 0; i < v.size(); ++i) sum += simd::active().sum_squares(as_doubles(v[i].coeffs()));
  return std::sqrt(v.lattice().cell_volume() * sum);
}

double l2_norm(const MatrixField& m) {
  double sum = 0.0;
  for (const auto& c : m.components()) sum += simd::active().sum_squares(as_doubles(c.coeffs()));
  return std::sqrt(m.lattice().cell_volume() * sum);
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_lattice(f.lattice(), g.lattice(), "inner product");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i].real() * g[i].real() + f[i].imag() * g[i].imag();
  return f.lattice().cell_volume() * sum;
}

double integral(const SpectralField& f) {
  return f.lattice().cell_volume() * std::sqrt(static_cast<double>(f.size())) * f[0].real();
}

}  // namespace vdlab
