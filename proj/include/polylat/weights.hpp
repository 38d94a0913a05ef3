#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polylat {

/// Positive weights gamma_u for nonempty u in {1..d}: either product weights
/// gamma_u = prod_{j in u} gamma_j, or explicit subset weights indexed by
/// bitmask (bit j-1 set iff j in u), practical for d <= 12.
class WeightSystem {
 public:
  enum class Kind { product, subset };
  static constexpr std::size_t max_subset_dimension = 12;

  static WeightSystem product(std::vector<double> gammas);
  /// by_mask has 2^d entries; entry 0 is ignored.
  static WeightSystem subset(std::size_t d, std::vector<double> by_mask);

  /// Weight expressions:
  ///   product:j^-a      gamma_j = j^(-a)
  ///   product:c^j       gamma_j = c^j
  ///   product:const:c   gamma_j = c   (product:c is accepted too)
  ///   file:PATH         one gamma_j per whitespace-separated token
  ///   subset:PATH       lines "j1,j2,... value" for every nonempty u
  static WeightSystem parse(std::string_view expr, std::size_t d);

  Kind kind() const noexcept { return kind_; }
  bool is_product() const noexcept { return kind_ == Kind::product; }
  std::size_t dimension() const noexcept { return d_; }

  /// Product weights only.
  double gamma_j(std::size_t j) const;
  std::span<const double> gammas() const;

  /// gamma_u for the subset given by its bitmask (mask != 0).
  double gamma(std::uint64_t mask) const;

  /// gamma_u^c for every u.
  WeightSystem pow(double c) const;
  /// Restriction to the first s coordinates.
  WeightSystem prefix(std::size_t s) const;

  /// sum_{u nonempty} gamma_u c^|u|.
  double subset_sum(double c) const;
  /// Same with gamma_u^e in place of gamma_u.
  double subset_sum(double c, double e) const;

  const std::string& description() const noexcept { return description_; }
  void set_description(std::string text) { description_ = std::move(text); }

 private:
  WeightSystem(Kind kind, std::size_t d, std::vector<double> values, std::string description);

  Kind kind_;
  std::size_t d_;
  std::vector<double> values_;  // gamma_j (product) or gamma by mask (subset)
  std::string description_;
};

}  // namespace polylat
