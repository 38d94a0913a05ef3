#pragma once

// Component-by-component construction of generating vectors. Candidates are
// all nonzero g of degree < m; g_1 = 1. Ties (scores within tie_tolerance
// times the largest |score| of the step) go to the smallest encoding.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polylat/criteria.hpp"
#include "polylat/ffpoly.hpp"
#include "polylat/lattice.hpp"
#include "polylat/weights.hpp"

namespace polylat::cbc {

enum class Criterion { K, wce };
enum class Engine { naive, fast };

const char* name(Criterion c) noexcept;
const char* name(Engine e) noexcept;
Criterion parse_criterion(const std::string& text);
Engine parse_engine(const std::string& text);

struct Config {
  std::uint32_t b = 2;
  int m = 4;
  std::size_t d = 1;
  WeightSystem weights = WeightSystem::product({1.0});
  Criterion criterion = Criterion::K;
  double alpha = 2.0;                     // wce only
  std::optional<std::uint64_t> modulus;   // encoding; smallest irreducible when absent
  Engine engine = Engine::fast;
  double tie_tolerance = 1e-11;
  bool record_scores = false;
  bool audit = false;

  /// Throws on an inconsistent configuration.
  void validate() const;
};

struct Result {
  Result(GeneratingVector vec, Modulus mod) : g(std::move(vec)), p(std::move(mod)) {}

  GeneratingVector g;
  Modulus p;
  Criterion criterion = Criterion::K;
  Engine engine = Engine::fast;
  std::optional<double> alpha;
  std::vector<double> values;   // criterion of the prefix g_1..g_s
  std::vector<double> seconds;  // wall time per step
  /// scores[s][c - 1] is the criterion of (g_1..g_s, c); empty for s = 0 or
  /// when scores are not recorded.
  std::vector<std::vector<double>> scores;
  std::vector<criteria::CriterionReport> audit;

  bool audit_passed() const noexcept;
  std::string to_json() const;
  /// "b m enc(p) enc(g_1) ... enc(g_d)"
  std::string vector_line() const;
};

Result construct(const Config& cfg);
Result construct_naive(const Config& cfg);
Result construct_fast(const Config& cfg);

/// One cbc_K report per step, then a cbc_T report for the full vector when m >= 4.
/// Only meaningful for criterion K.
std::vector<criteria::CriterionReport> audit(const Result& result, const WeightSystem& weights);

struct VectorFile {
  GeneratingVector g;
  Modulus p;
};
VectorFile parse_vector_line(const std::string& text);

/// Resident-memory estimate of a construction in bytes.
double memory_estimate(const Config& cfg);

}  // namespace polylat::cbc
