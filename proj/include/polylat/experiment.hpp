#pragma once

// Convergence studies (worst-case error against N) and scaling benchmarks
// of the fast construction.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polylat/weights.hpp"

namespace polylat::experiment {

struct ConvergenceSpec {
  std::uint32_t b = 2;
  std::size_t d = 100;
  int m_lo = 4;
  int m_hi = 12;
  std::vector<double> alphas{1.5, 2.0, 3.0};
  std::string weights = "product:j^-2";  // gamma; errors use gamma^alpha
  bool standard_cbc = false;
  /// Slope fit range; the upper half of [m_lo, m_hi] when absent.
  std::optional<int> fit_lo, fit_hi;
};

struct ConvergenceRow {
  int m;
  std::uint64_t n;
  std::vector<double> alg1;      // per alpha
  std::vector<double> standard;  // per alpha, empty unless requested
};

struct Slope {
  std::string series;
  double alpha;
  int fit_lo, fit_hi;
  double slope;
};

struct ConvergenceTable {
  ConvergenceSpec spec;
  std::vector<ConvergenceRow> rows;
  std::vector<Slope> slopes;

  /// Columns m,N,alg1_alpha<a>...,stdcbc_alpha<a>...
  std::string to_csv() const;
  /// Columns series,alpha,m_lo,m_hi,slope
  std::string slopes_csv() const;
};

ConvergenceTable convergence(const ConvergenceSpec& spec);

/// Least-squares slope of log e against log N over rows with m in [lo, hi].
double fit_slope(const std::vector<ConvergenceRow>& rows, std::size_t alpha_index, bool standard, int lo, int hi);

struct BenchSpec {
  std::uint32_t b = 2;
  std::vector<int> ms{10, 12, 14};
  std::vector<std::size_t> ds{50, 100};
  int reps = 3;  ///< rounds over the whole grid
  /// Each cell keeps repeating until it has run min_seconds / reps per round (capped at max_reps in total).
  double min_seconds = 0.2;
  int max_reps = 1000;
  std::string weights = "product:j^-2";
};

struct BenchRow {
  int m;
  std::size_t d;
  double seconds;  // fastest of the repetitions
  std::optional<double> ratio_m_plus_2;
  std::optional<double> ratio_2d;
};

struct BenchTable {
  std::vector<BenchRow> rows;
  /// Columns m,d,seconds,ratio_m_plus_2,ratio_2d
  std::string to_csv() const;
};

BenchTable bench(const BenchSpec& spec);

}  // namespace polylat::experiment
