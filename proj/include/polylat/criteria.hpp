#pragma once

// Quality criteria of polynomial lattice rules, evaluated as sums over the
// points (character property), plus brute-force dual-net oracles and the
// right-hand sides of the known error bounds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polylat/ffpoly.hpp"
#include "polylat/kernels.hpp"
#include "polylat/lattice.hpp"
#include "polylat/weights.hpp"

namespace polylat::criteria {

enum class Criterion { K, T_gamma, T_alpha, wce };
const char* name(Criterion c) noexcept;
Criterion parse_criterion(const std::string& text);

/// K = sum_u gamma_u sum_{n>=1} prod_{j in u} omega(x_{n,j}).
double quality_K(const GeneratingVector& g, const Modulus& p, const WeightSystem& w);
/// Dual-box sum with r_{1,gamma}.
double t_gamma(const GeneratingVector& g, const Modulus& p, const WeightSystem& w);
/// Dual-box sum with r_{alpha,gamma}, alpha >= 1.
double t_alpha_gamma(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w);
/// Worst-case error in the weighted Walsh space of smoothness alpha > 1.
double wce(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w);
double evaluate(Criterion c, const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w);

/// sum_{n in range} (sum_u gamma_u prod_{j in u} kernel(x_{n,j})), the range being
/// 0..N-1 or 1..N-1, optionally divided by N. All components must be nonzero.
double point_sum(const GeneratingVector& g, const Modulus& p, const WeightSystem& w, const kernels::KernelTable& kernel,
                 bool include_zero, bool normalize);

/// A_p(g): every k in {0..b^m-1}^d with sum_j k_j(x) g_j(x) = 0 mod p.
/// Guarded by b^(md) <= 2^24.
std::vector<std::vector<std::uint64_t>> enumerate_dual_box(const GeneratingVector& g, const Modulus& p);

/// sum over nonzero k in A_p(g) of 1 / r_{alpha,gamma}(k), by enumeration.
double dual_box_sum(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w);

struct DualNetSum {
  double partial;  // all dual vectors with every k_j < b^(m + extra_digits)
  double tail;     // exact remainder of the full dual-net sum
};
/// Worst-case error by dual-net enumeration, capped per coordinate, with
/// the remainder summed analytically.
DualNetSum wce_by_enumeration(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w,
                              int extra_digits);

enum class BoundKind { existence_T, trunc, existence_wce, cbc_K, cbc_T };
const char* name(BoundKind k) noexcept;
BoundKind parse_bound_kind(const std::string& text);

double theorem_bound(BoundKind kind, std::uint32_t b, int m, const WeightSystem& w, double alpha = 0.0);

struct CriterionReport {
  std::string criterion;
  double value = 0.0;
  std::optional<double> bound;
  std::uint32_t b = 2;
  int m = 1;
  std::size_t d = 0;
  std::optional<double> alpha;
  std::string weights;

  bool has_bound() const noexcept { return bound.has_value(); }
  /// value <= bound; true when no bound is attached.
  bool satisfied() const noexcept { return !bound || value <= *bound; }
  std::string to_json() const;
};

/// Evaluates c and attaches a bound: K gets cbc_K, T_gamma gets cbc_T
/// (m >= 4), wce gets T_alpha + trunc. T_alpha carries no bound.
CriterionReport report(Criterion c, const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w);

}  // namespace polylat::criteria
