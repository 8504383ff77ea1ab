#include "mfl/core/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "mfl/core/errors.hpp"

namespace mfl {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::vector<double> fft_wavenumbers(int n, double length) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / length;
  // For even n the Nyquist mode is stored as -n/2.
  for (int i = 0; i < n; ++i) k[i] = base * (i <= n / 2 - (n % 2 == 0 ? 1 : 0) ? i : i - n);
  return k;
}

ComplexFft::ComplexFft(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("FFT size must be positive");
  buf_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_1d(n, as_fftw(buf_), as_fftw(buf_), FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(n, as_fftw(buf_), as_fftw(buf_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

ComplexFft::~ComplexFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void ComplexFft::forward(std::span<const Complex> in, std::span<Complex> out) {
  std::copy(in.begin(), in.begin() + n_, buf_);
  forward_in_place();
  std::copy(buf_, buf_ + n_, out.begin());
}

void ComplexFft::backward(std::span<const Complex> in, std::span<Complex> out) {
  std::copy(in.begin(), in.begin() + n_, buf_);
  backward_in_place();
  std::copy(buf_, buf_ + n_, out.begin());
}

void ComplexFft::forward_in_place() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void ComplexFft::backward_in_place() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

RealFftNd::RealFftNd(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > 3) throw InvalidArgument("FFT rank must be 1..3");
  real_size_ = 1;
  for (int n : dims_) {
    if (n < 2) throw InvalidArgument("FFT axis too short");
    real_size_ *= n;
  }
  complex_size_ = real_size_ / dims_.back() * (dims_.back() / 2 + 1);
  real_ = fftw_alloc_real(real_size_);
  spec_ = reinterpret_cast<Complex*>(fftw_alloc_complex(complex_size_));
  std::lock_guard<std::mutex> lock(planner_mutex());
  const int rank = static_cast<int>(dims_.size());
  fwd_ = fftw_plan_dft_r2c(rank, dims_.data(), real_, as_fftw(spec_), FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r(rank, dims_.data(), as_fftw(spec_), real_, FFTW_ESTIMATE);
}

RealFftNd::~RealFftNd() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFftNd::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void RealFftNd::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

}  // namespace mfl
