#pragma once

// Polynomial lattice point sets P(g, p): x_n = (v_m(n g_1 / p), ..., v_m(n g_d / p))
// for all n with deg n < m, enumerated in encoding order n = 0 .. b^m - 1.
// Coordinates are kept as integer numerators a with x = a / b^m.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "polylat/digits.hpp"
#include "polylat/ffpoly.hpp"

namespace polylat {

struct GeneratingVector {
  std::uint32_t base = 2;
  int m = 1;
  std::vector<std::uint64_t> components;  // encodings, each < b^m

  std::size_t dimension() const noexcept { return components.size(); }
  PolyB component(std::size_t j) const { return PolyB::from_encoding(base, components.at(j)); }
  bool all_nonzero() const noexcept;
  /// Throws unless base/m match the modulus and every component has degree < m.
  void validate(const Modulus& p) const;
};

/// The F_b-linear map r -> (digits of v_m(r/p)) on residues r mod p, in packed
/// numerator form.
class LaurentMap {
 public:
  explicit LaurentMap(const Modulus& p);

  const Modulus& modulus() const noexcept { return p_; }
  const DigitPacker& packer() const noexcept { return packer_; }
  /// Packed numerator of v_m(r/p) for the residue with encoding r.
  DigitPacker::Word of_residue(std::uint64_t r) const noexcept;
  std::uint64_t numerator_of_residue(std::uint64_t r) const noexcept { return packer_.unpack(of_residue(r)); }
  /// Residue encoding of x^i g mod p for i = 0 .. m-1.
  std::vector<std::uint64_t> shifted_residues(std::uint64_t g) const;

 private:
  Modulus p_;
  DigitPacker packer_;
  std::vector<DigitPacker::Word> basis_;  // basis_[i * b + c] = packed v_m(c x^i / p)
};

/// Streams the packed numerators of one coordinate, x_{n,j} for n = start, start+1, ...
/// Each step costs O(1) amortized: stepping n in base b adds a fixed
/// prefix sum of the images of x^i g.
class ColumnStream {
 public:
  using Word = DigitPacker::Word;

  ColumnStream(const LaurentMap& map, std::uint64_t g, std::uint64_t start = 0);

  Word current() const noexcept { return word_; }
  std::uint64_t index() const noexcept { return n_; }
  int level() const noexcept { return packer_->level(word_); }

  void advance() noexcept {
    int t;
    if (base_ == 2) {
      t = __builtin_ctzll(~n_);
    } else {
      t = 0;
      while (t < m_ && digits_[t] == base_ - 1) digits_[t++] = 0;
      if (t < m_) ++digits_[t];
    }
    word_ = packer_->add(word_, prefix_[t < m_ ? t : m_ - 1]);
    ++n_;
  }

  /// Writes the levels of the next count points and advances past them.
  void fill_levels(std::uint8_t* out, std::size_t count);
  /// Adds the level histogram of the next count points to counts[0 .. m] and advances past them.
  void count_levels(std::uint64_t* counts, std::size_t count);

 private:
  const DigitPacker* packer_;
  std::uint32_t base_;
  int m_;
  std::uint64_t n_;
  Word word_ = 0;
  std::array<Word, 64> prefix_{};
  std::array<std::uint32_t, 64> digits_{};
  // blocks of b^k consecutive n: word(Q b^k + c) = word(Q b^k) + low_[c]
  int block_digits_ = 0;
  std::size_t block_ = 1;
  std::vector<Word> low_;
  std::array<Word, 64> block_step_{};  // block_step_[t] = sum_{i=k}^{k+t} image of x^i g

  void step_block() noexcept;
};

class PointSet {
 public:
  PointSet(std::uint32_t base, int m, std::size_t dimension);

  std::uint32_t base() const noexcept { return base_; }
  int m() const noexcept { return m_; }
  std::uint64_t size() const noexcept { return n_points_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::uint32_t numerator(std::uint64_t n, std::size_t j) const noexcept { return coords_[j * n_points_ + n]; }
  double coordinate(std::uint64_t n, std::size_t j) const noexcept {
    return static_cast<double>(numerator(n, j)) / static_cast<double>(n_points_);
  }
  std::span<const std::uint32_t> column(std::size_t j) const;
  std::span<std::uint32_t> column(std::size_t j);

 private:
  std::uint32_t base_;
  int m_;
  std::uint64_t n_points_;
  std::size_t dim_;
  std::vector<std::uint32_t> coords_;  // column-major
};

/// Numerators of v_m(n g / p) for n = 0 .. b^m - 1 (g = 0 gives a zero column).
std::vector<std::uint32_t> column_numerators(const LaurentMap& map, std::uint64_t g);

PointSet generate(const GeneratingVector& g, const Modulus& p);

/// True iff column j is a permutation of 0 .. N-1.
bool check_full_grid(const PointSet& ps, std::size_t j);

/// (1/N) sum_{n>=1} 1/x_{n,j}. Throws if a coordinate with n >= 1 is zero.
double inverse_coordinate_sum(const PointSet& ps, std::size_t j);

enum class CoordinateFormat { rational, decimal };

/// One point per line, coordinates separated by single spaces.
void write_text(const PointSet& ps, std::ostream& out, CoordinateFormat format);
/// Column-major little-endian uint32 numerators, no header.
void write_binary(const PointSet& ps, std::ostream& out);

}  // namespace polylat
