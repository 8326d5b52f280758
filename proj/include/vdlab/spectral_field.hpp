#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vdlab/common.hpp"
#include "vdlab/lattice.hpp"

namespace vdlab {

/// Fourier coefficients of a scalar field on a periodic lattice.
///
/// The transform is unitary: c(xi) = N^{-dim/2} sum_x f(x) e^{-i xi.x}, so
/// sum_x |f(x)|^2 = sum_xi |c(xi)|^2 and the box L^2 norm is
/// sqrt(cell_volume * sum |c|^2).  Derivatives carry the symbol i*xi.
///
/// `hermitian` is true iff the physical values are real, i.e.
/// c(-xi) = conj(c(xi)).
class SpectralField {
 public:
  explicit SpectralField(Lattice lattice, bool hermitian = true);
  SpectralField(Lattice lattice, ComplexVector coeffs, bool hermitian);

  const Lattice& lattice() const { return lattice_; }
  bool hermitian() const { return hermitian_; }
  void set_hermitian(bool h) { hermitian_ = h; }

  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }

  /// max |c(-xi) - conj(c(xi))| / max |c|.  Zero for an exactly real field.
  double hermitian_defect() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  Lattice lattice_;
  ComplexVector coeffs_;
  bool hermitian_;
};

/// dim scalar components on one lattice.
class VectorField {
 public:
  explicit VectorField(const Lattice& lattice);
  explicit VectorField(std::vector<SpectralField> components);

  int size() const { return static_cast<int>(components_.size()); }
  const Lattice& lattice() const { return components_.front().lattice(); }
  SpectralField& operator[](int i) { return components_[i]; }
  const SpectralField& operator[](int i) const { return components_[i]; }

 private:
  std::vector<SpectralField> components_;
};

/// dim x dim scalar components on one lattice; (i, j) is row i, column j.
class MatrixField {
 public:
  explicit MatrixField(const Lattice& lattice);
  explicit MatrixField(std::vector<SpectralField> row_major_components);

  int dim() const { return dim_; }
  const Lattice& lattice() const { return components_.front().lattice(); }
  SpectralField& operator()(int i, int j) { return components_[i * dim_ + j]; }
  const SpectralField& operator()(int i, int j) const { return components_[i * dim_ + j]; }
  std::span<SpectralField> components() { return components_; }
  std::span<const SpectralField> components() const { return components_; }

  MatrixField transposed() const;

 private:
  int dim_;
  std::vector<SpectralField> components_;
};

// ---------------------------------------------------------------------------
// Transforms

SpectralField dft_forward(std::span<const double> physical, const Lattice& lattice);
SpectralField dft_forward_complex(std::span<const cplx> physical, const Lattice& lattice);
/// Physical values of a hermitian field; InputError otherwise.
RealVector dft_inverse(const SpectralField& f);
ComplexVector dft_inverse_complex(const SpectralField& f);

// ---------------------------------------------------------------------------
// Fourier multipliers

using Symbol = std::function<cplx(const Wavevector&)>;

/// Multiplies every coefficient by symbol(xi).  The zero mode is multiplied
/// by symbol(0) when finite and set to 0 otherwise.  The result is flagged
/// hermitian when the input is and the sampled symbol satisfies
/// sigma(-xi) = conj(sigma(xi)).
SpectralField apply_multiplier(const SpectralField& f, const Symbol& symbol);

/// Multiplies by a real, even symbol given as one value per mode.
SpectralField apply_real_symbol(const SpectralField& f, std::span<const double> values);

/// Lambda^s = |D|^s.  The zero mode is dropped for s != 0.
SpectralField lambda_power(const SpectralField& f, double s);

/// d/dx_axis (symbol i*xi_axis, zero on the Nyquist plane of that axis).
SpectralField partial(const SpectralField& f, int axis);
VectorField gradient(const SpectralField& f);

/// Lambda^{-1} d_i d_j g, symbol -xi_i xi_j / |xi| (zero mode 0).
SpectralField riesz_hessian(const SpectralField& g, int i, int j);
/// Lambda^{-1} d_axis g, symbol i xi_axis / |xi| (zero mode 0).
SpectralField riesz(const SpectralField& g, int axis);

/// d = Lambda^{-1} div v.
SpectralField leray_div(const VectorField& v);
/// Omega = Lambda^{-1} curl v with (curl v)_ij = d_j v^i - d_i v^j.
MatrixField leray_curl(const VectorField& v);

/// Two-thirds rule: zero every mode with some |k_i| > N/3.
SpectralField dealias(const SpectralField& f);
/// 1 on retained modes, 0 elsewhere.
RealVector dealias_mask(const Lattice& lattice);

// ---------------------------------------------------------------------------
// Norms (box integrals with the midpoint rule, evaluated through Parseval)

double l2_norm(const SpectralField& f);
double l2_norm(const VectorField& v);
double l2_norm(const MatrixField& m);
/// Real part of the L^2 inner product (f | g) = integral f conj(g).
double inner_product(const SpectralField& f, const SpectralField& g);
/// integral of f over the box (real part of the mean times volume).
double integral(const SpectralField& f);

}  // namespace vdlab
