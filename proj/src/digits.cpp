#include "polylat/digits.hpp"

#include "polylat/error.hpp"

namespace polylat {

DigitPacker::DigitPacker(std::uint32_t base, int m) : base_(base), m_(m) {
  require(base >= 2, "digit base must be >= 2");
  require(m >= 0, "digit count must be nonnegative");
  if (base == 2) {
    width_ = 1;
  } else {
    int bits = 0;
    while ((1u << bits) < base) ++bits;
    width_ = bits + 1;
  }
  if (m * width_ > 64)
    fail(ErrorCode::scale_exceeded,
         "b=" + std::to_string(base) + ", m=" + std::to_string(m) + " exceeds the packed digit capacity");
  if (base != 2) {
    for (int i = 0; i < m; ++i) {
      bias_ |= ((Word{1} << (width_ - 1)) - base) << (i * width_);
      guard_ |= Word{1} << (i * width_ + width_ - 1);
    }
  }
  for (int bw = 1; bw <= 64; ++bw) level_of_width_[bw] = static_cast<std::uint8_t>((bw - 1) / width_ + 1);
}

DigitPacker::Word DigitPacker::pack(std::uint64_t value) const noexcept {
  if (base_ == 2) return value;
  Word w = 0;
  for (int i = 0; i < m_ && value; ++i) {
    w |= Word{value % base_} << (i * width_);
    value /= base_;
  }
  return w;
}

std::uint64_t DigitPacker::unpack(Word w) const noexcept {
  if (base_ == 2) return w;
  const Word mask = (Word{1} << width_) - 1;
  std::uint64_t value = 0;
  for (int i = m_; i-- > 0;) value = value * base_ + ((w >> (i * width_)) & mask);
  return value;
}

DigitPacker::Word DigitPacker::scale(Word a, std::uint32_t c) const noexcept {
  c %= base_;
  Word result = 0;
  while (c) {
    if (c & 1) result = add(result, a);
    a = add(a, a);
    c >>= 1;
  }
  return result;
}

}  // namespace polylat
