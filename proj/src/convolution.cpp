#include "polylat/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "polylat/error.hpp"

namespace polylat {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

fftw_complex* as_fftw(std::complex<double>* z) { return reinterpret_cast<fftw_complex*>(z); }

}  // namespace

struct FftPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

FftPlan::FftPlan(std::size_t size) : n_(size), impl_(std::make_unique<Impl>()) {
  require(size >= 1 && (size & (size - 1)) == 0, "FFT size must be a power of two");
  std::vector<std::complex<double>> scratch(size);
  std::lock_guard lock(planner_mutex());
  const int n = static_cast<int>(size);
  impl_->fwd = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  impl_->inv = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!impl_->fwd || !impl_->inv) fail(ErrorCode::internal, "FFT planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->inv) fftw_destroy_plan(impl_->inv);
}

void FftPlan::forward(std::span<std::complex<double>> data) const {
  require(data.size() == n_, "FFT input has the wrong length");
  fftw_execute_dft(impl_->fwd, as_fftw(data.data()), as_fftw(data.data()));
}

void FftPlan::inverse(std::span<std::complex<double>> data) const {
  require(data.size() == n_, "FFT input has the wrong length");
  fftw_execute_dft(impl_->inv, as_fftw(data.data()), as_fftw(data.data()));
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  require(n >= 1, "DFT length must be >= 1");
  // X_k = w_k sum_j (x_j w_j) conj(w_(k-j)), w_k = e^(-i pi k^2 / n)
  std::vector<std::complex<double>> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto k2 = static_cast<double>((static_cast<unsigned __int128>(k) * k) % (2 * n));
    const double angle = -std::numbers::pi * k2 / static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }
  const std::size_t m = next_pow2(2 * n - 1);
  FftPlan plan(m);
  std::vector<std::complex<double>> a(m), c(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  c[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) c[k] = c[m - k] = std::conj(chirp[k]);
  plan.forward(a);
  plan.forward(c);
  for (std::size_t i = 0; i < m; ++i) a[i] *= c[i];
  plan.inverse(a);
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = chirp[k] * a[k] / static_cast<double>(m);
  return out;
}

std::vector<double> circular_convolve(std::span<const double> u, std::span<const double> v) {
  require(u.size() == v.size(), "circular convolution needs equal lengths");
  require(!u.empty(), "circular convolution needs length >= 1");
  CirculantConvolver conv(v);
  std::vector<double> out(u.size());
  conv.apply(u, out);
  return out;
}

std::vector<double> circular_convolve_direct(std::span<const double> u, std::span<const double> v) {
  require(u.size() == v.size(), "circular convolution needs equal lengths");
  require(!u.empty(), "circular convolution needs length >= 1");
  const std::size_t n = u.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += u[i] * v[(k + n - i) % n];
    out[k] = s;
  }
  return out;
}

struct CirculantConvolver::Impl {
  std::size_t size = 0;  // padded transform length, a power of two >= 2L - 1
  double* real = nullptr;
  fftw_complex* freq = nullptr;
  std::vector<std::complex<double>> spectrum;  // kernel transform scaled by 1 / size
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

CirculantConvolver::CirculantConvolver(std::span<const double> kernel)
    : len_(kernel.size()), impl_(std::make_unique<Impl>()) {
  require(len_ >= 1, "circular convolution needs length >= 1");
  auto& im = *impl_;
  im.size = next_pow2(2 * len_ - 1);
  const std::size_t bins = im.size / 2 + 1;
  {
    std::lock_guard lock(planner_mutex());
    im.real = fftw_alloc_real(im.size);
    im.freq = fftw_alloc_complex(bins);
    if (!im.real || !im.freq) fail(ErrorCode::scale_exceeded, "out of memory for the convolution buffers");
    const int n = static_cast<int>(im.size);
    im.fwd = fftw_plan_dft_r2c_1d(n, im.real, im.freq, FFTW_ESTIMATE);
    im.inv = fftw_plan_dft_c2r_1d(n, im.freq, im.real, FFTW_ESTIMATE);
    if (!im.fwd || !im.inv) fail(ErrorCode::internal, "FFT planning failed");
  }
  std::fill(im.real, im.real + im.size, 0.0);
  std::copy(kernel.begin(), kernel.end(), im.real);
  fftw_execute(im.fwd);
  im.spectrum.resize(bins);
  const double scale = 1.0 / static_cast<double>(im.size);
  for (std::size_t i = 0; i < bins; ++i) im.spectrum[i] = std::complex<double>(im.freq[i][0], im.freq[i][1]) * scale;
}

CirculantConvolver::~CirculantConvolver() {
  std::lock_guard lock(planner_mutex());
  auto& im = *impl_;
  if (im.fwd) fftw_destroy_plan(im.fwd);
  if (im.inv) fftw_destroy_plan(im.inv);
  fftw_free(im.real);
  fftw_free(im.freq);
}

void CirculantConvolver::apply(std::span<const double> a, std::span<double> out) const {
  require(a.size() == len_ && out.size() == len_, "circular convolution needs equal lengths");
  auto& im = *impl_;
  std::copy(a.begin(), a.end(), im.real);
  std::fill(im.real + len_, im.real + im.size, 0.0);
  fftw_execute(im.fwd);
  const std::size_t bins = im.size / 2 + 1;
  for (std::size_t i = 0; i < bins; ++i) {
    const std::complex<double> z(im.freq[i][0], im.freq[i][1]);
    const auto prod = z * im.spectrum[i];
    im.freq[i][0] = prod.real();
    im.freq[i][1] = prod.imag();
  }
  fftw_execute(im.inv);
  // fold the linear convolution (length 2L - 1) back modulo L
  for (std::size_t k = 0; k < len_; ++k) out[k] = im.real[k] + (k + len_ < im.size ? im.real[k + len_] : 0.0);
}

}  // namespace polylat
