#pragma once

#include <array>
#include <cstdint>

namespace polylat {

/// Vectors of m base-b digits packed into one machine word, one fixed-width
/// field per digit (field i holds the coefficient of b^i). Addition is
/// digitwise mod b, i.e. addition in F_b^m. For b = 2 the packing is the
/// identity and addition is XOR.
///
/// The same representation serves residues (digit i = coefficient of x^i) and
/// coordinate numerators (digit i = coefficient of b^i in a).
class DigitPacker {
 public:
  using Word = std::uint64_t;

  DigitPacker(std::uint32_t base, int m);

  std::uint32_t base() const noexcept { return base_; }
  int digits() const noexcept { return m_; }
  int field_width() const noexcept { return width_; }
  Word bias() const noexcept { return bias_; }
  Word guard() const noexcept { return guard_; }

  Word pack(std::uint64_t value) const noexcept;
  std::uint64_t unpack(Word w) const noexcept;

  Word add(Word a, Word c) const noexcept {
    if (base_ == 2) return a ^ c;
    const Word s = a + c;
    const Word over = ((s + bias_) & guard_) >> (width_ - 1);
    return s - over * base_;
  }

  /// Digitwise c * a mod b.
  Word scale(Word a, std::uint32_t c) const noexcept;
  Word negate(Word a) const noexcept { return scale(a, base_ - 1); }

  /// 0 for the zero vector, otherwise 1 + index of the highest nonzero digit.
  /// For a packed integer a > 0 this is floor(log_b a) + 1.
  int level(Word w) const noexcept {
    return w ? level_of_width_[64 - __builtin_clzll(w)] : 0;
  }

 private:
  std::uint32_t base_;
  int m_;
  int width_;
  Word bias_ = 0;   // 2^(w-1) - b in every field
  Word guard_ = 0;  // bit w-1 of every field
  std::array<std::uint8_t, 65> level_of_width_{};
};

}  // namespace polylat
