#include <random>

#include "doctest.h"
#include "polylat/convolution.hpp"

using namespace polylat;

TEST_CASE("circular convolution matches the direct sum at every length") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t len : {1, 2, 3, 7, 8, 15, 26, 31, 80, 242, 1023}) {
    std::vector<double> a(len), k(len);
    for (auto& x : a) x = u(rng);
    for (auto& x : k) x = u(rng);
    const auto want = circular_convolve_direct(a, k);
    const auto got = circular_convolve(a, k);
    CirculantConvolver conv(k);
    std::vector<double> out(len);
    conv.apply(a, out);
    for (std::size_t i = 0; i < len; ++i) {
      CHECK(std::abs(got[i] - want[i]) < 1e-10);
      CHECK(std::abs(out[i] - want[i]) < 1e-10);
    }
  }
}

TEST_CASE("dft of arbitrary length") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t len : {1, 5, 12, 63}) {
    std::vector<std::complex<double>> x(len);
    for (auto& v : x) v = {u(rng), u(rng)};
    const auto y = dft(x);
    for (std::size_t k = 0; k < len; ++k) {
      std::complex<double> s = 0.0;
      for (std::size_t n = 0; n < len; ++n)
        s += x[n] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(n * k % len) / static_cast<double>(len));
      CHECK(std::abs(y[k] - s) < 1e-9);
    }
  }
}

TEST_CASE("fft round trip") {
  FftPlan plan(16);
  std::vector<std::complex<double>> x(16);
  for (std::size_t i = 0; i < 16; ++i) x[i] = {static_cast<double>(i), 1.0};
  auto y = x;
  plan.forward(y);
  plan.inverse(y);
  for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(y[i] / 16.0 - x[i]) < 1e-12);
}
