#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mfl {

using Complex = std::complex<double>;

/// Angular wavenumbers of an n-point periodic grid of length L, in FFT order.
std::vector<double> fft_wavenumbers(int n, double length);

/// 1-D complex FFT (unnormalized both ways). Plans are built with
/// FFTW_ESTIMATE so the chosen algorithm, and hence every bit of the result,
/// does not depend on timing. One instance per thread.
class ComplexFft {
public:
  explicit ComplexFft(int n);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  int size() const { return n_; }
  void forward(std::span<const Complex> in, std::span<Complex> out);
  void backward(std::span<const Complex> in, std::span<Complex> out);
  /// Direct access to the aligned work buffer for in-place use.
  Complex* buffer() { return buf_; }
  void forward_in_place();
  void backward_in_place();

private:
  int n_;
  Complex* buf_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

/// Real-to-complex transform on a row-major tensor grid (last axis fastest).
class RealFftNd {
public:
  explicit RealFftNd(std::vector<int> dims);
  ~RealFftNd();
  RealFftNd(const RealFftNd&) = delete;
  RealFftNd& operator=(const RealFftNd&) = delete;

  const std::vector<int>& dims() const { return dims_; }
  std::size_t real_size() const { return real_size_; }
  std::size_t complex_size() const { return complex_size_; }
  double* real_data() { return real_; }
  Complex* complex_data() { return spec_; }
  /// real_data -> complex_data
  void forward();
  /// complex_data -> real_data (unnormalized; clobbers complex_data)
  void backward();

private:
  std::vector<int> dims_;
  std::size_t real_size_ = 0;
  std::size_t complex_size_ = 0;
  double* real_ = nullptr;
  Complex* spec_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace mfl
