#include "polylat/ffpoly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "polylat/error.hpp"

namespace polylat {
namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t b) {
  // b prime: a^(b-2)
  std::uint64_t result = 1, x = a % b;
  for (std::uint32_t e = b - 2; e; e >>= 1) {
    if (e & 1) result = result * x % b;
    x = x * x % b;
  }
  return static_cast<std::uint32_t>(result);
}

void check_same_base(const PolyB& a, const PolyB& c) {
  if (a.base() != c.base()) fail(ErrorCode::invalid_argument, "polynomials over different bases");
}

void trim(std::vector<std::uint32_t>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// Digit-vector residue arithmetic used by the encoding overloads.
std::vector<std::uint32_t> to_digits(std::uint64_t enc, std::uint32_t b, int m) {
  std::vector<std::uint32_t> d(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m && enc; ++i) {
    d[i] = static_cast<std::uint32_t>(enc % b);
    enc /= b;
  }
  return d;
}

std::uint64_t from_digits(std::span<const std::uint32_t> d, std::uint32_t b) {
  std::uint64_t enc = 0;
  for (std::size_t i = d.size(); i-- > 0;) enc = enc * b + d[i];
  return enc;
}

// Carry-less product of two binary polynomials of degree < 32.
std::uint64_t clmul(std::uint64_t a, std::uint64_t c) {
  std::uint64_t r = 0;
  while (c) {
    if (c & 1) r ^= a;
    a <<= 1;
    c >>= 1;
  }
  return r;
}

std::uint64_t reduce_binary(std::uint64_t v, std::uint64_t p, int m) {
  for (int i = 63; i >= m; --i)
    if ((v >> i) & 1) v ^= p << (i - m);
  return v;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PolyB::PolyB(std::uint32_t base) : base_(base) {
  if (!is_prime(base)) fail(ErrorCode::invalid_argument, "base must be prime, got " + std::to_string(base));
}

PolyB::PolyB(std::uint32_t base, std::vector<std::uint32_t> coeffs) : PolyB(base) {
  coeffs_ = std::move(coeffs);
  canonicalize();
}

void PolyB::canonicalize() {
  for (auto& c : coeffs_) c %= base_;
  trim(coeffs_);
}

PolyB PolyB::from_encoding(std::uint32_t base, std::uint64_t enc) {
  PolyB q(base);
  while (enc) {
    q.coeffs_.push_back(static_cast<std::uint32_t>(enc % base));
    enc /= base;
  }
  return q;
}

PolyB PolyB::monomial(std::uint32_t base, int degree, std::uint32_t coeff) {
  require(degree >= 0, "monomial degree must be nonnegative");
  std::vector<std::uint32_t> c(static_cast<std::size_t>(degree) + 1, 0);
  c.back() = coeff;
  return PolyB(base, std::move(c));
}

PolyB PolyB::parse(std::uint32_t base, std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) fail(ErrorCode::invalid_argument, "empty polynomial");

  if (std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
    std::uint64_t enc = 0;
    for (char ch : s) {
      if (enc > (std::numeric_limits<std::uint64_t>::max() - 9) / 10)
        fail(ErrorCode::invalid_argument, "polynomial encoding overflows: " + s);
      enc = enc * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return from_encoding(base, enc);
  }

  std::vector<std::uint64_t> acc;
  std::size_t i = 0;
  auto read_uint = [&](std::uint64_t& out) {
    std::size_t start = i;
    std::uint64_t value = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      value = value * 10 + static_cast<std::uint64_t>(s[i] - '0');
      if (value > 1'000'000'000) fail(ErrorCode::invalid_argument, "number too large in polynomial: " + s);
      ++i;
    }
    if (i == start) return false;
    out = value;
    return true;
  };
  while (i < s.size()) {
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
      negative = s[i] == '-';
      ++i;
    } else if (i != 0) {
      fail(ErrorCode::invalid_argument, "malformed polynomial: " + s);
    }
    std::uint64_t coeff = 1;
    bool has_coeff = read_uint(coeff);
    if (i < s.size() && s[i] == '*') {
      if (!has_coeff) fail(ErrorCode::invalid_argument, "malformed polynomial: " + s);
      ++i;
    }
    std::uint64_t exponent = 0;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      ++i;
      exponent = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        if (!read_uint(exponent)) fail(ErrorCode::invalid_argument, "missing exponent in polynomial: " + s);
      }
    } else if (!has_coeff) {
      fail(ErrorCode::invalid_argument, "malformed polynomial: " + s);
    }
    if (exponent > 4096) fail(ErrorCode::invalid_argument, "exponent too large in polynomial: " + s);
    if (acc.size() <= exponent) acc.resize(exponent + 1, 0);
    std::uint64_t c = coeff % base;
    if (negative) c = (base - c) % base;
    acc[exponent] = (acc[exponent] + c) % base;
  }
  std::vector<std::uint32_t> coeffs(acc.begin(), acc.end());
  return PolyB(base, std::move(coeffs));
}

std::uint64_t PolyB::encoding() const {
  std::uint64_t enc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (enc > (std::numeric_limits<std::uint64_t>::max() - coeffs_[i]) / base_)
      fail(ErrorCode::scale_exceeded, "polynomial encoding does not fit in 64 bits");
    enc = enc * base_ + coeffs_[i];
  }
  return enc;
}

std::string PolyB::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int e = degree(); e >= 0; --e) {
    std::uint32_t c = coeffs_[e];
    if (!c) continue;
    if (!out.empty()) out += '+';
    if (c != 1 || e == 0) out += std::to_string(c);
    if (e >= 1) out += 'x';
    if (e >= 2) out += '^' + std::to_string(e);
  }
  return out;
}

PolyB operator+(const PolyB& a, const PolyB& c) {
  check_same_base(a, c);
  const std::uint32_t b = a.base();
  std::vector<std::uint32_t> r(std::max(a.coefficients().size(), c.coefficients().size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (a.coefficient(i) + c.coefficient(i)) % b;
  return PolyB(b, std::move(r));
}

PolyB operator-(const PolyB& a) {
  const std::uint32_t b = a.base();
  std::vector<std::uint32_t> r(a.coefficients().begin(), a.coefficients().end());
  for (auto& x : r) x = (b - x) % b;
  return PolyB(b, std::move(r));
}

PolyB operator-(const PolyB& a, const PolyB& c) { return a + (-c); }

PolyB operator*(const PolyB& a, const PolyB& c) {
  check_same_base(a, c);
  const std::uint32_t b = a.base();
  if (a.is_zero() || c.is_zero()) return PolyB(b);
  auto ac = a.coefficients();
  auto cc = c.coefficients();
  std::vector<std::uint64_t> r(ac.size() + cc.size() - 1, 0);
  for (std::size_t i = 0; i < ac.size(); ++i)
    for (std::size_t j = 0; j < cc.size(); ++j) r[i + j] = (r[i + j] + std::uint64_t{ac[i]} * cc[j]) % b;
  return PolyB(b, std::vector<std::uint32_t>(r.begin(), r.end()));
}

PolyB operator*(std::uint32_t s, const PolyB& a) {
  const std::uint32_t b = a.base();
  std::vector<std::uint32_t> r(a.coefficients().begin(), a.coefficients().end());
  for (auto& x : r) x = static_cast<std::uint32_t>(std::uint64_t{x} * (s % b) % b);
  return PolyB(b, std::move(r));
}

DivMod divmod(const PolyB& a, const PolyB& c) {
  check_same_base(a, c);
  if (c.is_zero()) fail(ErrorCode::domain, "division by zero polynomial");
  const std::uint32_t b = a.base();
  if (a.degree() < c.degree()) return {PolyB(b), a};
  std::vector<std::uint32_t> rem(a.coefficients().begin(), a.coefficients().end());
  auto cc = c.coefficients();
  const int dc = c.degree();
  const std::uint32_t lead_inv = inv_mod(c.leading(), b);
  std::vector<std::uint32_t> quot(static_cast<std::size_t>(a.degree() - dc) + 1, 0);
  for (int e = a.degree(); e >= dc; --e) {
    std::uint32_t top = rem[e];
    if (!top) continue;
    std::uint32_t t = static_cast<std::uint32_t>(std::uint64_t{top} * lead_inv % b);
    quot[e - dc] = t;
    for (int k = 0; k <= dc; ++k) {
      std::uint64_t sub = std::uint64_t{t} * cc[k] % b;
      rem[e - dc + k] = static_cast<std::uint32_t>((rem[e - dc + k] + b - sub) % b);
    }
  }
  return {PolyB(b, std::move(quot)), PolyB(b, std::move(rem))};
}

PolyB gcd(const PolyB& a, const PolyB& c) {
  check_same_base(a, c);
  if (a.is_zero() && c.is_zero()) fail(ErrorCode::domain, "gcd of two zero polynomials");
  PolyB x = a, y = c;
  while (!y.is_zero()) {
    PolyB r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return inv_mod(x.leading(), x.base()) * x;
}

bool is_irreducible(const PolyB& p) {
  if (p.degree() < 1) fail(ErrorCode::invalid_argument, "irreducibility undefined for constant polynomials");
  const std::uint32_t b = p.base();
  const int half = p.degree() / 2;
  for (int k = 1; k <= half; ++k) {
    std::uint64_t lo = 1;
    for (int i = 0; i < k; ++i) lo *= b;
    // monic divisors of degree k: encodings b^k .. 2 b^k - 1
    for (std::uint64_t enc = lo; enc < 2 * lo; ++enc)
      if (divmod(p, PolyB::from_encoding(b, enc)).remainder.is_zero()) return false;
  }
  return true;
}

Modulus::Modulus(PolyB p) : p_(std::move(p)), size_(1) {
  if (p_.degree() < 1) fail(ErrorCode::invalid_argument, "modulus must have degree >= 1");
  if (p_.degree() > 62) fail(ErrorCode::scale_exceeded, "modulus degree too large");
  for (int i = 0; i < p_.degree(); ++i) {
    if (size_ > std::numeric_limits<std::uint64_t>::max() / p_.base())
      fail(ErrorCode::scale_exceeded, "b^m does not fit in 64 bits");
    size_ *= p_.base();
  }
  if (!is_irreducible(p_)) fail(ErrorCode::invalid_argument, "modulus " + p_.to_string() + " is not irreducible");
}

Modulus find_irreducible(std::uint32_t b, int m) {
  require(m >= 1, "modulus degree must be >= 1");
  PolyB probe(b);  // validates the base
  std::uint64_t lo = 1;
  for (int i = 0; i < m; ++i) {
    if (lo > std::numeric_limits<std::uint64_t>::max() / (2ULL * b))
      fail(ErrorCode::scale_exceeded, "b^m does not fit in 64 bits");
    lo *= b;
  }
  for (std::uint64_t enc = lo; enc < 2 * lo; ++enc) {
    PolyB q = PolyB::from_encoding(b, enc);
    if (is_irreducible(q)) return Modulus(std::move(q));
  }
  fail(ErrorCode::internal, "no irreducible polynomial found");
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t c, const Modulus& p) {
  const std::uint32_t b = p.base();
  const int m = p.degree();
  if (b == 2 && m <= 31) return reduce_binary(clmul(a, c), p.encoding(), m);

  auto ad = to_digits(a, b, m);
  auto cd = to_digits(c, b, m);
  std::vector<std::uint64_t> prod(2 * static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    if (!ad[i]) continue;
    for (int j = 0; j < m; ++j) prod[i + j] += std::uint64_t{ad[i]} * cd[j];
  }
  for (auto& x : prod) x %= b;
  auto pc = p.poly().coefficients();
  const std::uint64_t lead_inv = inv_mod(p.poly().leading(), b);
  for (int e = 2 * m - 1; e >= m; --e) {
    std::uint64_t top = prod[e] % b;
    if (!top) continue;
    std::uint64_t t = top * lead_inv % b;
    for (int k = 0; k <= m; ++k) prod[e - m + k] = (prod[e - m + k] + (b - t) * pc[k]) % b;
  }
  std::vector<std::uint32_t> r(prod.begin(), prod.begin() + m);
  return from_digits(r, b);
}

PolyB mul_mod(const PolyB& a, const PolyB& c, const Modulus& p) {
  check_same_base(a, c);
  if (a.base() != p.base()) fail(ErrorCode::invalid_argument, "polynomials over different bases");
  return divmod(a * c, p.poly()).remainder;
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, const Modulus& p) {
  std::uint64_t result = 1;
  while (e) {
    if (e & 1) result = mul_mod(result, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return result;
}

std::vector<std::uint32_t> laurent_digits(const PolyB& n, const Modulus& p) {
  if (n.base() != p.base()) fail(ErrorCode::invalid_argument, "polynomials over different bases");
  const int m = p.degree();
  if (n.degree() >= m) fail(ErrorCode::invalid_argument, "numerator degree must be below the modulus degree");
  const std::uint32_t b = p.base();
  const std::uint64_t lead_inv = inv_mod(p.poly().leading(), b);
  auto pc = p.poly().coefficients();
  // r holds the running remainder, with room for the x^m coefficient.
  std::vector<std::uint64_t> r(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 0; i <= n.degree(); ++i) r[i] = n.coefficient(i);
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(m), 0);
  for (int l = 0; l < m; ++l) {
    for (int k = m; k > 0; --k) r[k] = r[k - 1];
    r[0] = 0;
    std::uint64_t t = r[m] * lead_inv % b;
    digits[l] = static_cast<std::uint32_t>(t);
    if (t)
      for (int k = 0; k <= m; ++k) r[k] = (r[k] + (b - t) * pc[k]) % b;
  }
  return digits;
}

std::uint64_t laurent_numerator(const PolyB& n, const Modulus& p) {
  std::uint64_t a = 0;
  for (std::uint32_t t : laurent_digits(n, p)) a = a * p.base() + t;
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t find_primitive_element(const Modulus& p) {
  const std::uint64_t order = p.size() - 1;
  const auto factors = prime_factors(order);
  for (std::uint64_t c = 1; c < p.size(); ++c) {
    bool primitive = true;
    for (std::uint64_t l : factors) {
      if (pow_mod(c, order / l, p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return c;
  }
  fail(ErrorCode::internal, "no primitive element found");
}

ResidueTables::ResidueTables(const Modulus& p) {
  if (p.size() > (1ULL << 30)) fail(ErrorCode::scale_exceeded, "residue tables limited to b^m <= 2^30");
  generator_ = find_primitive_element(p);
  const std::uint64_t order = p.size() - 1;
  exp_.resize(order);
  log_.assign(p.size(), 0);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = static_cast<std::uint32_t>(x);
    log_[x] = static_cast<std::uint32_t>(i);
    x = mul_mod(x, generator_, p);
  }
}

}  // namespace polylat
