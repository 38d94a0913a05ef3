#pragma once

// Per-coordinate kernels on the grid x = a / b^m.
//
//   omega(a)          (1-b) floor(log_b x) - b
//   phi_alpha(a)      sum_{k>=1} wal_k(x) b^(-alpha psi(k))
//   phi_alpha_trunc   the same sum restricted to 1 <= k < b^m
//
// Every kernel depends on a only through the number of base-b digits of a,
// so tables are stored by level (0 for a = 0, psi(a) + 1 otherwise).

#include <complex>
#include <cstdint>
#include <vector>

namespace polylat::kernels {

/// floor(log_b k) for k >= 1, by digit count.
int psi(std::uint64_t k, std::uint32_t b);
/// 0 for k = 0, otherwise psi(k) + 1.
int level(std::uint64_t k, std::uint32_t b) noexcept;

/// wal_k(a / b^m). Digits of k beyond position m pair with zero digits of x.
std::complex<double> walsh(std::uint64_t k, std::uint64_t a, int m, std::uint32_t b);

/// r_alpha(k) = 1 for k = 0, b^(alpha psi(k)) otherwise.
double decay(std::uint64_t k, std::uint32_t b, double alpha);
/// sum_{k>=1} 1 / r_alpha(k); requires alpha > 1.
double mu(std::uint32_t b, double alpha);

std::int64_t omega(std::uint64_t a, int m, std::uint32_t b);
double phi_alpha(std::uint64_t a, int m, std::uint32_t b, double alpha);
double phi_alpha_trunc(std::uint64_t a, int m, std::uint32_t b, double alpha);

enum class Kind { omega, phi, phi_trunc };

class KernelTable {
 public:
  /// alpha is ignored for omega; phi needs alpha > 1, phi_trunc alpha >= 1.
  KernelTable(Kind kind, std::uint32_t b, int m, double alpha = 1.0);

  Kind kind() const noexcept { return kind_; }
  std::uint32_t base() const noexcept { return b_; }
  int m() const noexcept { return m_; }
  double alpha() const noexcept { return alpha_; }
  /// False only for omega, which is undefined at a = 0.
  bool zero_valid() const noexcept { return kind_ != Kind::omega; }

  double by_level(int lvl) const noexcept { return values_[static_cast<std::size_t>(lvl)]; }
  const std::vector<double>& levels() const noexcept { return values_; }
  /// Kernel at numerator a; throws at a = 0 for omega.
  double at(std::uint64_t a) const;
  /// All b^m entries indexed by numerator (entry 0 is NaN for omega).
  std::vector<double> dense() const;
  /// sum_{a=1}^{b^m-1} kernel(a).
  double sum_nonzero() const noexcept;

 private:
  Kind kind_;
  std::uint32_t b_;
  int m_;
  double alpha_;
  std::vector<double> values_;
};

}  // namespace polylat::kernels
