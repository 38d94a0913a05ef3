#include "polylat/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <ostream>
#include <string>

#include "polylat/error.hpp"

namespace polylat {
namespace {

std::uint64_t x_residue(const Modulus& p) {
  return divmod(PolyB::monomial(p.base(), 1), p.poly()).remainder.encoding();
}

}  // namespace

bool GeneratingVector::all_nonzero() const noexcept {
  for (auto c : components)
    if (c == 0) return false;
  return true;
}

void GeneratingVector::validate(const Modulus& p) const {
  if (base != p.base() || m != p.degree())
    fail(ErrorCode::invalid_argument, "generating vector (b, m) does not match the modulus");
  if (components.empty()) fail(ErrorCode::invalid_argument, "generating vector has dimension 0");
  for (std::size_t j = 0; j < components.size(); ++j)
    if (components[j] >= p.size())
      fail(ErrorCode::invalid_argument,
           "component " + std::to_string(j + 1) + " has degree >= m (encoding " + std::to_string(components[j]) + ")");
}

LaurentMap::LaurentMap(const Modulus& p) : p_(p), packer_(p.base(), p.degree()) {
  const std::uint32_t b = p.base();
  const int m = p.degree();
  basis_.assign(static_cast<std::size_t>(m) * b, 0);
  for (int i = 0; i < m; ++i) {
    auto xi = divmod(PolyB::monomial(b, i), p.poly()).remainder;
    const auto w = packer_.pack(laurent_numerator(xi, p));
    for (std::uint32_t c = 0; c < b; ++c) basis_[static_cast<std::size_t>(i) * b + c] = packer_.scale(w, c);
  }
}

DigitPacker::Word LaurentMap::of_residue(std::uint64_t r) const noexcept {
  const std::uint32_t b = packer_.base();
  DigitPacker::Word w = 0;
  if (b == 2) {
    while (r) {
      const int i = __builtin_ctzll(r);
      w ^= basis_[2 * static_cast<std::size_t>(i) + 1];
      r &= r - 1;
    }
    return w;
  }
  for (std::size_t i = 0; r; ++i, r /= b) w = packer_.add(w, basis_[i * b + r % b]);
  return w;
}

std::vector<std::uint64_t> LaurentMap::shifted_residues(std::uint64_t g) const {
  const int m = p_.degree();
  std::vector<std::uint64_t> out(static_cast<std::size_t>(m));
  const std::uint64_t x = x_residue(p_);
  std::uint64_t r = g;
  for (int i = 0; i < m; ++i) {
    out[i] = r;
    r = mul_mod(r, x, p_);
  }
  return out;
}

ColumnStream::ColumnStream(const LaurentMap& map, std::uint64_t g, std::uint64_t start)
    : packer_(&map.packer()), base_(map.modulus().base()), m_(map.modulus().degree()), n_(start) {
  if (g >= map.modulus().size()) fail(ErrorCode::invalid_argument, "generator degree must be below the modulus degree");
  const auto residues = map.shifted_residues(g);
  Word acc = 0;
  for (int i = 0; i < m_; ++i) {
    const Word basis = map.of_residue(residues[i]);
    acc = packer_->add(acc, basis);
    prefix_[i] = acc;
  }
  // largest block b^k <= 256 with k <= m
  block_digits_ = 0;
  block_ = 1;
  while (block_digits_ < m_ && block_ * base_ <= 256) {
    block_ *= base_;
    ++block_digits_;
  }
  std::vector<Word> images(m_);
  for (int i = 0; i < m_; ++i) images[i] = map.of_residue(residues[i]);
  low_.assign(block_, 0);
  for (std::size_t c = 0; c < block_; ++c) {
    Word w = 0;
    std::size_t rest = c;
    for (int i = 0; i < block_digits_; ++i, rest /= base_)
      if (rest % base_) w = packer_->add(w, packer_->scale(images[i], static_cast<std::uint32_t>(rest % base_)));
    low_[c] = w;
  }
  acc = 0;
  for (int i = block_digits_; i < m_; ++i) {
    acc = packer_->add(acc, images[i]);
    block_step_[i - block_digits_] = acc;
  }
  std::uint64_t rest = start;
  for (int i = 0; i < m_; ++i) {
    const auto digit = static_cast<std::uint32_t>(rest % base_);
    rest /= base_;
    digits_[i] = digit;
    if (digit) word_ = packer_->add(word_, packer_->scale(map.of_residue(residues[i]), digit));
  }
}

void ColumnStream::step_block() noexcept {
  const int upper = m_ - block_digits_;
  const std::uint64_t q = n_ / block_;
  n_ += block_;
  if (upper == 0) return;  // one block covers every n
  int t = 0;
  const int k = block_digits_;
  if (base_ == 2) {
    t = __builtin_ctzll(~q);
  } else {
    while (t < upper && digits_[k + t] == base_ - 1) digits_[k + t++] = 0;
    if (t < upper) ++digits_[k + t];
  }
  word_ = packer_->add(word_, block_step_[t < upper ? t : upper - 1]);
}

void ColumnStream::fill_levels(std::uint8_t* out, std::size_t count) {
  std::size_t i = 0;
  while (i < count && n_ % block_ != 0) {
    out[i++] = static_cast<std::uint8_t>(level());
    advance();
  }
  while (count - i >= block_) {
    const Word base_word = word_;
    for (std::size_t c = 0; c < block_; ++c)
      out[i + c] = static_cast<std::uint8_t>(packer_->level(packer_->add(base_word, low_[c])));
    i += block_;
    step_block();
  }
  while (i < count) {
    out[i++] = static_cast<std::uint8_t>(level());
    advance();
  }
}

void ColumnStream::count_levels(std::uint64_t* counts, std::size_t count) {
  std::size_t i = 0;
  while (i < count && n_ % block_ != 0) {
    ++counts[level()];
    advance();
    ++i;
  }
  std::array<std::array<std::uint64_t, 65>, 4> by_width{};
  const Word bias = packer_->bias(), guard = packer_->guard(), b = base_;
  const int shift = packer_->field_width() - 1;
  const Word* low = low_.data();
  const std::size_t block = block_;
  const auto add = [&](Word x, Word y) {
    if (b == 2) return x ^ y;
    const Word s = x + y;
    return s - (((s + bias) & guard) >> shift) * b;
  };
  while (count - i >= block) {
    const Word base_word = word_;
    std::size_t c = 0;
    for (; c + 4 <= block; c += 4) {
      ++by_width[0][std::bit_width(add(base_word, low[c]))];
      ++by_width[1][std::bit_width(add(base_word, low[c + 1]))];
      ++by_width[2][std::bit_width(add(base_word, low[c + 2]))];
      ++by_width[3][std::bit_width(add(base_word, low[c + 3]))];
    }
    for (; c < block; ++c) ++by_width[0][std::bit_width(add(base_word, low[c]))];
    i += block;
    step_block();
  }
  for (int w = 0; w <= 64; ++w) {
    const std::uint64_t total = by_width[0][w] + by_width[1][w] + by_width[2][w] + by_width[3][w];
    if (total) counts[w == 0 ? 0 : packer_->level(Word{1} << (w - 1))] += total;
  }
  while (i < count) {
    ++counts[level()];
    advance();
    ++i;
  }
}

PointSet::PointSet(std::uint32_t base, int m, std::size_t dimension)
    : base_(base), m_(m), n_points_(1), dim_(dimension) {
  for (int i = 0; i < m; ++i) n_points_ *= base;
  if (n_points_ > (1ULL << 32) || n_points_ * dimension > (1ULL << 28))
    fail(ErrorCode::scale_exceeded, "point set too large to materialize (N*d > 2^28); use column streaming");
  coords_.assign(n_points_ * dimension, 0);
}

std::span<const std::uint32_t> PointSet::column(std::size_t j) const {
  if (j >= dim_) fail(ErrorCode::invalid_argument, "column index out of range");
  return {coords_.data() + j * n_points_, n_points_};
}

std::span<std::uint32_t> PointSet::column(std::size_t j) {
  if (j >= dim_) fail(ErrorCode::invalid_argument, "column index out of range");
  return {coords_.data() + j * n_points_, n_points_};
}

std::vector<std::uint32_t> column_numerators(const LaurentMap& map, std::uint64_t g) {
  const auto n_points = map.modulus().size();
  std::vector<std::uint32_t> out(n_points);
  ColumnStream stream(map, g);
  for (std::uint64_t n = 0; n < n_points; ++n, stream.advance())
    out[n] = static_cast<std::uint32_t>(map.packer().unpack(stream.current()));
  return out;
}

PointSet generate(const GeneratingVector& g, const Modulus& p) {
  g.validate(p);
  LaurentMap map(p);
  PointSet ps(p.base(), p.degree(), g.dimension());
  for (std::size_t j = 0; j < g.dimension(); ++j) {
    auto col = column_numerators(map, g.components[j]);
    std::copy(col.begin(), col.end(), ps.column(j).begin());
  }
  return ps;
}

bool check_full_grid(const PointSet& ps, std::size_t j) {
  auto col = ps.column(j);
  std::vector<bool> seen(ps.size(), false);
  for (auto a : col) {
    if (a >= ps.size() || seen[a]) return false;
    seen[a] = true;
  }
  return true;
}

double inverse_coordinate_sum(const PointSet& ps, std::size_t j) {
  auto col = ps.column(j);
  std::vector<std::uint32_t> sorted(col.begin() + 1, col.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() == 0)
    fail(ErrorCode::domain, "zero coordinate at some n >= 1 (column is not a full grid)");
  // (1/N) sum N/a = sum 1/a, smallest terms first
  double sum = 0.0;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) sum += 1.0 / static_cast<double>(*it);
  return sum;
}

void write_text(const PointSet& ps, std::ostream& out, CoordinateFormat format) {
  const std::string denom = std::to_string(ps.size());
  char buf[64];
  for (std::uint64_t n = 0; n < ps.size(); ++n) {
    for (std::size_t j = 0; j < ps.dimension(); ++j) {
      if (j) out << ' ';
      if (format == CoordinateFormat::rational) {
        out << ps.numerator(n, j) << '/' << denom;
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", ps.coordinate(n, j));
        out << buf;
      }
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::io, "failed writing point set");
}

void write_binary(const PointSet& ps, std::ostream& out) {
  for (std::size_t j = 0; j < ps.dimension(); ++j) {
    for (auto a : ps.column(j)) {
      const unsigned char bytes[4] = {static_cast<unsigned char>(a), static_cast<unsigned char>(a >> 8),
                                      static_cast<unsigned char>(a >> 16), static_cast<unsigned char>(a >> 24)};
      out.write(reinterpret_cast<const char*>(bytes), 4);
    }
  }
  if (!out) fail(ErrorCode::io, "failed writing point set");
}

}  // namespace polylat
