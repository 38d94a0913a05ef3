#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace polylat {

/// In-place complex FFT of a fixed power-of-two size.
class FftPlan {
 public:
  explicit FftPlan(std::size_t size);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const noexcept { return n_; }
  void forward(std::span<std::complex<double>> data) const;
  /// Unnormalized inverse (scaled by size()).
  void inverse(std::span<std::complex<double>> data) const;

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Arbitrary-length DFT by the chirp-z (Bluestein) reduction to power-of-two FFTs.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x);

/// c[k] = sum_i u[i] v[(k - i) mod L].
std::vector<double> circular_convolve(std::span<const double> u, std::span<const double> v);
/// O(L^2) reference.
std::vector<double> circular_convolve_direct(std::span<const double> u, std::span<const double> v);

/// Circular convolution with a fixed kernel of any length L >= 1, evaluated as
/// a zero-padded linear convolution folded back modulo L.
class CirculantConvolver {
 public:
  explicit CirculantConvolver(std::span<const double> kernel);
  ~CirculantConvolver();
  CirculantConvolver(const CirculantConvolver&) = delete;
  CirculantConvolver& operator=(const CirculantConvolver&) = delete;

  std::size_t length() const noexcept { return len_; }
  /// out[k] = sum_i a[i] kernel[(k - i) mod L]. Not reentrant.
  void apply(std::span<const double> a, std::span<double> out) const;

 private:
  struct Impl;
  std::size_t len_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace polylat
