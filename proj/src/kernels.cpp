#include "polylat/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "polylat/error.hpp"

namespace polylat::kernels {
namespace {

void check_base(std::uint32_t b) { require(b >= 2, "base must be >= 2"); }

void check_grid(std::uint64_t a, int m, std::uint32_t b) {
  check_base(b);
  require(m >= 1 && m <= 63, "m out of range");
  std::uint64_t n = 1;
  for (int i = 0; i < m; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / b) return;
    n *= b;
  }
  if (a >= n) fail(ErrorCode::invalid_argument, "numerator " + std::to_string(a) + " is not below b^m");
}

// (b-1) sum_{u=0}^{t-2} beta^u - beta^(t-1) for t >= 1
double phi_at_depth(int t, std::uint32_t b, double beta) {
  double sum = 0.0, power = 1.0;
  for (int u = 0; u + 2 <= t; ++u) {
    sum += power;
    power *= beta;
  }
  return (b - 1.0) * sum - power;
}

double trunc_at_zero(int m, std::uint32_t b, double beta) {
  double sum = 0.0, power = 1.0;
  for (int u = 0; u < m; ++u) {
    sum += power;
    power *= beta;
  }
  return (b - 1.0) * sum;
}

}  // namespace

int psi(std::uint64_t k, std::uint32_t b) {
  check_base(b);
  if (k == 0) fail(ErrorCode::domain, "floor(log_b 0) is undefined");
  return level(k, b) - 1;
}

int level(std::uint64_t k, std::uint32_t b) noexcept {
  int digits = 0;
  for (; k; k /= b) ++digits;
  return digits;
}

std::complex<double> walsh(std::uint64_t k, std::uint64_t a, int m, std::uint32_t b) {
  check_grid(a, m, b);
  // x digits: a = sum_i xi_i b^(m-i); xi_i is digit m-i of a
  std::uint64_t phase = 0;
  for (int i = 1; i <= m && k; ++i, k /= b) {
    std::uint64_t xi = a;
    for (int r = 0; r < m - i; ++r) xi /= b;
    phase += (k % b) * (xi % b);
  }
  phase %= b;
  if (phase == 0) return {1.0, 0.0};
  if (b == 2) return {-1.0, 0.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / b;
  return {std::cos(angle), std::sin(angle)};
}

double decay(std::uint64_t k, std::uint32_t b, double alpha) {
  if (k == 0) return 1.0;
  return std::pow(static_cast<double>(b), alpha * psi(k, b));
}

double mu(std::uint32_t b, double alpha) {
  check_base(b);
  if (!(alpha > 1.0)) fail(ErrorCode::domain, "mu_b(alpha) diverges for alpha <= 1");
  const double ba = std::pow(static_cast<double>(b), alpha);
  return ba * (b - 1.0) / (ba - b);
}

std::int64_t omega(std::uint64_t a, int m, std::uint32_t b) {
  check_grid(a, m, b);
  if (a == 0) fail(ErrorCode::domain, "L-kernel undefined at 0");
  const std::int64_t t = m - psi(a, b);
  return (static_cast<std::int64_t>(b) - 1) * t - static_cast<std::int64_t>(b);
}

double phi_alpha(std::uint64_t a, int m, std::uint32_t b, double alpha) {
  check_grid(a, m, b);
  if (!(alpha > 1.0)) fail(ErrorCode::domain, "Walsh series diverges for alpha <= 1");
  if (a == 0) return mu(b, alpha);
  return phi_at_depth(m - psi(a, b), b, std::pow(static_cast<double>(b), 1.0 - alpha));
}

double phi_alpha_trunc(std::uint64_t a, int m, std::uint32_t b, double alpha) {
  check_grid(a, m, b);
  require(alpha >= 1.0, "alpha must be >= 1");
  const double beta = std::pow(static_cast<double>(b), 1.0 - alpha);
  if (a == 0) return trunc_at_zero(m, b, beta);
  return phi_at_depth(m - psi(a, b), b, beta);
}

KernelTable::KernelTable(Kind kind, std::uint32_t b, int m, double alpha)
    : kind_(kind), b_(b), m_(m), alpha_(kind == Kind::omega ? 1.0 : alpha) {
  check_base(b);
  require(m >= 1 && m <= 63, "m out of range");
  if (kind == Kind::phi && !(alpha > 1.0)) fail(ErrorCode::domain, "Walsh series diverges for alpha <= 1");
  if (kind == Kind::phi_trunc) require(alpha >= 1.0, "alpha must be >= 1");
  const double beta = std::pow(static_cast<double>(b), 1.0 - alpha_);
  values_.resize(static_cast<std::size_t>(m) + 1);
  for (int lvl = 1; lvl <= m; ++lvl) {
    const int t = m + 1 - lvl;
    values_[lvl] = kind == Kind::omega ? static_cast<double>((static_cast<std::int64_t>(b) - 1) * t - b)
                                       : phi_at_depth(t, b, beta);
  }
  switch (kind) {
    case Kind::omega: values_[0] = std::numeric_limits<double>::quiet_NaN(); break;
    case Kind::phi: values_[0] = mu(b, alpha_); break;
    case Kind::phi_trunc: values_[0] = trunc_at_zero(m, b, beta); break;
  }
}

double KernelTable::at(std::uint64_t a) const {
  const int lvl = level(a, b_);
  if (lvl > m_) fail(ErrorCode::invalid_argument, "numerator is not below b^m");
  if (lvl == 0 && !zero_valid()) fail(ErrorCode::domain, "L-kernel undefined at 0");
  return values_[lvl];
}

std::vector<double> KernelTable::dense() const {
  std::uint64_t n = 1;
  for (int i = 0; i < m_; ++i) n *= b_;
  std::vector<double> out(n);
  out[0] = values_[0];
  // numerators in [b^(l-1), b^l) share level l
  std::uint64_t lo = 1;
  for (int lvl = 1; lvl <= m_; ++lvl, lo *= b_)
    for (std::uint64_t a = lo; a < lo * b_; ++a) out[a] = values_[lvl];
  return out;
}

double KernelTable::sum_nonzero() const noexcept {
  double sum = 0.0, count = 1.0;
  for (int lvl = 1; lvl <= m_; ++lvl, count *= b_) sum += (b_ - 1.0) * count * values_[lvl];
  return sum;
}

}  // namespace polylat::kernels
