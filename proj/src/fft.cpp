#include "vdlab/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace vdlab {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

}  // namespace

FftPlans::FftPlans(int dim, int points) {
  int n[3] = {points, points, points};
  std::size_t full = 1;
  for (int d = 0; d < dim; ++d) full *= static_cast<std::size_t>(points);
  half_size_ = full / points * (points / 2 + 1);

  ComplexVector a(full), b(full);
  RealVector r(full);
  const unsigned flags = FFTW_ESTIMATE;
  forward_ = fftw_plan_dft(dim, n, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft(dim, n, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  forward_real_ = fftw_plan_dft_r2c(dim, n, r.data(), as_fftw(a.data()), flags);
  backward_real_ = fftw_plan_dft_c2r(dim, n, as_fftw(a.data()), r.data(), flags);
  if (!forward_ || !backward_ || !forward_real_ || !backward_real_) throw RuntimeError("FFTW planning failed");
}

FftPlans::~FftPlans() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(backward_);
  fftw_destroy_plan(forward_real_);
  fftw_destroy_plan(backward_real_);
}

const FftPlans& FftPlans::for_lattice(const Lattice& lattice) {
  // The mutex must outlive the cache (plans lock it when destroyed).
  std::mutex& mutex = planner_mutex();
  static std::map<std::pair<int, int>, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(lattice.dim(), lattice.points());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<FftPlans>(new FftPlans(lattice.dim(), lattice.points()))).first;
  }
  return *it->second;
}

void FftPlans::forward(const cplx* in, cplx* out) const { fftw_execute_dft(forward_, as_fftw(in), as_fftw(out)); }

void FftPlans::backward(const cplx* in, cplx* out) const { fftw_execute_dft(backward_, as_fftw(in), as_fftw(out)); }

void FftPlans::forward_real(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(forward_real_, const_cast<double*>(in), as_fftw(out));
}

void FftPlans::backward_real(cplx* in, double* out) const { fftw_execute_dft_c2r(backward_real_, as_fftw(in), out); }

}  // namespace vdlab
