#pragma once

// Polynomials over Z_b (b prime): ring operations, irreducibility, residue
// arithmetic modulo an irreducible p, formal Laurent expansion of n(x)/p(x),
// and the exp/log tables of the cyclic group (F_b[x]/(p))^*.
//
// Polynomials are identified with integers through the base-b encoding
// enc(q) = sum_i c_i b^i, so residues modulo a degree-m modulus are exactly
// the integers 0 .. b^m - 1.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polylat {

bool is_prime(std::uint64_t n);

class PolyB {
 public:
  /// Zero polynomial over Z_base. Throws unless base is prime.
  explicit PolyB(std::uint32_t base);
  /// Coefficients little-endian (coeffs[0] is the constant term); reduced mod base.
  PolyB(std::uint32_t base, std::vector<std::uint32_t> coeffs);

  static PolyB from_encoding(std::uint32_t base, std::uint64_t enc);
  static PolyB monomial(std::uint32_t base, int degree, std::uint32_t coeff = 1);
  /// Accepts either an integer encoding ("7") or human form ("x^2+x+1", "2x^3 + 1").
  static PolyB parse(std::uint32_t base, std::string_view text);

  std::uint32_t base() const noexcept { return base_; }
  /// -1 stands for the degree of the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::uint32_t coefficient(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
  std::uint32_t leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
  std::span<const std::uint32_t> coefficients() const noexcept { return coeffs_; }

  std::uint64_t encoding() const;
  std::string to_string() const;

  friend bool operator==(const PolyB&, const PolyB&) = default;

 private:
  void canonicalize();

  std::uint32_t base_;
  std::vector<std::uint32_t> coeffs_;
};

PolyB operator+(const PolyB& a, const PolyB& c);
PolyB operator-(const PolyB& a, const PolyB& c);
PolyB operator-(const PolyB& a);
PolyB operator*(const PolyB& a, const PolyB& c);
/// Multiply by a scalar in Z_b.
PolyB operator*(std::uint32_t s, const PolyB& a);

struct DivMod {
  PolyB quotient;
  PolyB remainder;
};

/// a = q*c + r with deg r < deg c. Throws ErrorCode::domain on c == 0.
DivMod divmod(const PolyB& a, const PolyB& c);
/// Monic greatest common divisor (zero only when both inputs are zero).
PolyB gcd(const PolyB& a, const PolyB& c);

/// Trial division by every monic polynomial of degree <= deg(p)/2.
bool is_irreducible(const PolyB& p);

/// Irreducible modulus of degree m >= 1.
class Modulus {
 public:
  explicit Modulus(PolyB p);

  const PolyB& poly() const noexcept { return p_; }
  std::uint32_t base() const noexcept { return p_.base(); }
  int degree() const noexcept { return p_.degree(); }
  /// b^m, the number of residues.
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t encoding() const { return p_.encoding(); }

 private:
  PolyB p_;
  std::uint64_t size_;
};

/// The monic irreducible of degree m with the smallest encoding.
Modulus find_irreducible(std::uint32_t b, int m);

PolyB mul_mod(const PolyB& a, const PolyB& c, const Modulus& p);
/// Residue arithmetic on encodings (operands must be < b^m).
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t c, const Modulus& p);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, const Modulus& p);

/// First m coefficients t_1..t_m (of x^-1..x^-m) of the Laurent expansion of n/p.
std::vector<std::uint32_t> laurent_digits(const PolyB& n, const Modulus& p);
/// sum_i t_i b^(m-i): the integer a with v_m(n/p) = a / b^m.
std::uint64_t laurent_numerator(const PolyB& n, const Modulus& p);

/// Prime factors of n (distinct, ascending), by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// A primitive element xi of F_b[x]/(p) with exp[i] = xi^i and log = exp^-1.
class ResidueTables {
 public:
  explicit ResidueTables(const Modulus& p);

  std::uint64_t generator() const noexcept { return generator_; }
  /// Length b^m - 1.
  std::span<const std::uint32_t> exp() const noexcept { return exp_; }
  /// Length b^m; entry 0 is unused.
  std::span<const std::uint32_t> log() const noexcept { return log_; }
  std::uint64_t order() const noexcept { return exp_.size(); }

 private:
  std::uint64_t generator_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

/// Primitive element search alone: first candidate in encoding order whose
/// order is exactly b^m - 1.
std::uint64_t find_primitive_element(const Modulus& p);

}  // namespace polylat
