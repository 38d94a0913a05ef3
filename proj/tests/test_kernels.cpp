#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "polylat/error.hpp"
#include "polylat/kernels.hpp"

using namespace polylat;
namespace k = polylat::kernels;

TEST_CASE("psi, level and decay") {
  CHECK(k::psi(1, 2) == 0);
  CHECK(k::psi(8, 2) == 3);
  CHECK(k::psi(26, 3) == 2);
  CHECK(k::level(0, 3) == 0);
  CHECK(k::level(27, 3) == 4);
  CHECK_THROWS_AS(k::psi(0, 2), Error);
  CHECK(k::decay(0, 2, 2.0) == 1.0);
  CHECK(k::decay(5, 2, 2.0) == 16.0);
}

TEST_CASE("walsh functions") {
  for (std::uint64_t a = 0; a < 8; ++a) CHECK(k::walsh(0, a, 3, 2) == std::complex<double>(1.0, 0.0));
  CHECK(k::walsh(1, 1, 1, 2).real() == -1.0);
  CHECK(k::walsh(2, 1, 2, 2).real() == -1.0);
  for (unsigned b : {2u, 3u, 5u})
    for (std::uint64_t kk = 0; kk < 200; ++kk)
      for (std::uint64_t a = 0; a < b * b * b; a += 3) {
        const auto got = k::walsh(kk, a, 3, b), want = oracle::walsh(kk, a, 3, b);
        CHECK(std::abs(got - want) < 1e-12);
        if (b == 2) CHECK(std::abs(got.imag()) == 0.0);
      }
}

TEST_CASE("omega examples") {
  CHECK(k::omega(1, 2, 2) == 0);
  CHECK(k::omega(2, 2, 2) == -1);
  CHECK(k::omega(1, 2, 2) + k::omega(2, 2, 2) + k::omega(3, 2, 2) == -2);
  CHECK_THROWS_WITH(k::omega(0, 2, 2), "L-kernel undefined at 0");
  for (unsigned b : {2u, 3u, 5u})
    for (int m = 1; m <= 5; ++m)
      for (std::uint64_t a = 1; a < static_cast<std::uint64_t>(std::pow(b, m)); ++a)
        CHECK(static_cast<double>(k::omega(a, m, b)) == oracle::omega(a, m, b));
}

TEST_CASE("phi_alpha examples") {
  CHECK(k::mu(2, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(k::phi_alpha(0, 2, 2, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(k::phi_alpha(2, 2, 2, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(k::phi_alpha(1, 2, 2, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(oracle::walsh_series_direct(1, 2, 2, 2.0, 1 << 20) - 0.5) < 2e-6);
  CHECK_THROWS_AS(k::phi_alpha(1, 2, 2, 1.0), Error);
  CHECK_THROWS_AS(k::mu(2, 1.0), Error);
}

TEST_CASE("phi_alpha_trunc examples") {
  CHECK(k::phi_alpha_trunc(0, 2, 2, 1.0) == 2.0);
  CHECK(k::phi_alpha_trunc(1, 2, 2, 1.0) == 0.0);
  CHECK(k::phi_alpha_trunc(0, 3, 2, 2.0) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(oracle::walsh_series_direct(1, 2, 2, 1.0, 4) == doctest::Approx(0.0));
}

TEST_CASE("mu matches the geometric series") {
  for (unsigned b : {2u, 3u, 5u})
    for (double alpha : {1.5, 2.0, 3.0}) {
      double s = 0.0;
      for (int a = 0; a < 400; ++a) s += (b - 1.0) * std::pow(b, a * (1.0 - alpha));
      CHECK(std::abs(k::mu(b, alpha) - s) < 1e-12);
    }
}

TEST_CASE("level-sum oracle agrees with term-by-term summation") {
  for (unsigned b : {2u, 3u})
    for (int m = 1; m <= 4; ++m) {
      const auto n = static_cast<std::uint64_t>(std::pow(b, m));
      for (std::uint64_t a = 0; a < n; ++a)
        CHECK(std::abs(oracle::walsh_series(a, m, b, 2.0, m + 2) - oracle::walsh_series_direct(a, m, b, 2.0, n * b * b)) <
              1e-12);
    }
}

TEST_CASE("kernel tables") {
  const k::KernelTable om(k::Kind::omega, 3, 4);
  CHECK(std::isnan(om.by_level(0)));
  CHECK_THROWS_AS(om.at(0), Error);
  CHECK(om.at(5) == static_cast<double>(k::omega(5, 4, 3)));
  CHECK(om.sum_nonzero() == -8.0);
  const k::KernelTable ph(k::Kind::phi, 2, 5, 2.0);
  const auto dense = ph.dense();
  REQUIRE(dense.size() == 32);
  for (std::uint64_t a = 0; a < 32; ++a) CHECK(dense[a] == k::phi_alpha(a, 5, 2, 2.0));
  CHECK_THROWS_AS(k::KernelTable(k::Kind::phi, 2, 5, 1.0), Error);
  const k::KernelTable tr(k::Kind::phi_trunc, 2, 5, 1.0);
  CHECK(tr.at(0) == 5.0);
}

TEST_CASE("truncated series of the logarithm off the grid") {
  std::mt19937_64 rng(11);
  for (unsigned b : {2u, 3u}) {
    const int m = 4, extra = 6;
    const auto n = static_cast<std::uint64_t>(std::pow(b, m));
    const auto fine = static_cast<std::uint64_t>(std::pow(b, m + extra));
    std::uniform_int_distribution<std::uint64_t> pick(1, fine - 1);
    for (int trial = 0; trial < 200; ++trial) {
      std::uint64_t a = pick(rng);
      if (a % b == 0) a += 1;  // more than m digits
      const double x = static_cast<double>(a) / static_cast<double>(fine);
      double partial = 0.0;
      for (std::uint64_t kk = 0; kk < n; ++kk) partial += k::walsh(kk, a, m + extra, b).real() / k::decay(kk, b, 1.0);
      const int fl = oracle::digit_count(a, b) - 1 - (m + extra);
      const double target = -(b - 1.0) * (fl + 1);
      CHECK(std::abs(partial - target) <= (b / (b - 1.0)) / (static_cast<double>(n) * x) + 1e-12);
    }
  }
}
