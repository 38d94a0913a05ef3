#pragma once

// Slow reference computations used only by the tests. Nothing here calls into
// the library; polynomials are plain coefficient vectors over Z_b.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Poly = std::vector<int>;  // little-endian coefficients in [0, b)

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly decode(std::uint64_t enc, unsigned b) {
  Poly p;
  for (; enc; enc /= b) p.push_back(static_cast<int>(enc % b));
  return p;
}

inline std::uint64_t encode(const Poly& p, unsigned b) {
  std::uint64_t e = 0;
  for (std::size_t i = p.size(); i-- > 0;) e = e * b + static_cast<std::uint64_t>(p[i]);
  return e;
}

inline Poly add(const Poly& x, const Poly& y, unsigned b) {
  Poly r(std::max(x.size(), y.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = ((i < x.size() ? x[i] : 0) + (i < y.size() ? y[i] : 0)) % static_cast<int>(b);
  trim(r);
  return r;
}

inline Poly mul(const Poly& x, const Poly& y, unsigned b) {
  if (x.empty() || y.empty()) return {};
  Poly r(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] = (r[i + j] + x[i] * y[j]) % static_cast<int>(b);
  trim(r);
  return r;
}

inline int inverse_mod(int a, unsigned b) {
  for (int t = 1; t < static_cast<int>(b); ++t)
    if (a * t % static_cast<int>(b) == 1) return t;
  return 0;
}

/// Schoolbook long division: x = q*y + r.
inline void divide(Poly x, const Poly& y, unsigned b, Poly& q, Poly& r) {
  const int ib = static_cast<int>(b);
  const int inv = inverse_mod(y.back(), b);
  trim(x);
  q.assign(x.size() >= y.size() ? x.size() - y.size() + 1 : 0, 0);
  while (x.size() >= y.size() && !x.empty()) {
    const std::size_t shift = x.size() - y.size();
    const int c = x.back() * inv % ib;
    q[shift] = c;
    for (std::size_t i = 0; i < y.size(); ++i) x[shift + i] = ((x[shift + i] - c * y[i]) % ib + ib) % ib;
    trim(x);
  }
  trim(q);
  r = x;
}

inline Poly mod(const Poly& x, const Poly& y, unsigned b) {
  Poly q, r;
  divide(x, y, b, q, r);
  return r;
}

inline bool irreducible(const Poly& p, unsigned b) {
  const int deg = static_cast<int>(p.size()) - 1;
  std::uint64_t hi = 1;
  for (int i = 0; i <= deg / 2; ++i) hi *= b;
  for (std::uint64_t e = b; e < hi; ++e) {  // every divisor candidate of degree 1 .. deg/2
    if (mod(p, decode(e, b), b).empty()) return false;
  }
  return deg >= 1;
}

/// Numerator a of v_m(n g / p): the quotient of x^m (n g mod p) by p, read as a base-b integer.
inline std::uint64_t numerator(std::uint64_t n, std::uint64_t g, std::uint64_t p, unsigned b, int m) {
  const Poly pp = decode(p, b);
  Poly r = mod(mul(decode(n, b), decode(g, b), b), pp, b);
  if (r.empty()) return 0;
  Poly shifted(static_cast<std::size_t>(m), 0);
  shifted.insert(shifted.end(), r.begin(), r.end());
  Poly q, rest;
  divide(shifted, pp, b, q, rest);
  return encode(q, b);
}

/// Number of base-b digits of a (0 for a = 0).
inline int digit_count(std::uint64_t a, unsigned b) {
  int c = 0;
  for (std::uint64_t pw = 1; pw <= a; pw *= b) ++c;
  return c;
}

/// (1 - b) floor(log_b(a / b^m)) - b for a >= 1.
inline double omega(std::uint64_t a, int m, unsigned b) {
  const long fl = digit_count(a, b) - 1 - m;
  return (1.0 - b) * static_cast<double>(fl) - b;
}

/// wal_k(a / b^m) by pairing the digits of k with the fractional digits of x.
inline std::complex<double> walsh(std::uint64_t k, std::uint64_t a, int m, unsigned b) {
  long phase = 0;
  std::vector<int> xi(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i, a /= b) xi[static_cast<std::size_t>(m - 1 - i)] = static_cast<int>(a % b);
  for (int i = 0; k; ++i, k /= b)
    if (i < m) phase += static_cast<long>(k % b) * xi[static_cast<std::size_t>(i)];
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase % b) / b);
}

/// S_s = sum of wal_k(x) over all k with exactly s + 1 digits, for s = 0 .. levels - 1.
/// Expanded digit by digit: the sum over k factors into one geometric sum per digit.
inline std::vector<std::complex<double>> walsh_level_sums(std::uint64_t a, int m, unsigned b, int levels) {
  std::vector<std::complex<double>> digit_sum(static_cast<std::size_t>(levels));
  std::vector<std::complex<double>> lead_sum(static_cast<std::size_t>(levels));
  std::vector<int> xi(static_cast<std::size_t>(levels), 0);
  std::uint64_t rest = a;
  for (int i = 0; i < m; ++i, rest /= b)
    if (m - 1 - i < levels) xi[static_cast<std::size_t>(m - 1 - i)] = static_cast<int>(rest % b);
  for (int i = 0; i < levels; ++i) {
    std::complex<double> all = 0.0, nonzero = 0.0;
    for (unsigned c = 0; c < b; ++c) {
      const auto w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(c * xi[i] % b) / b);
      all += w;
      if (c) nonzero += w;
    }
    digit_sum[static_cast<std::size_t>(i)] = all;
    lead_sum[static_cast<std::size_t>(i)] = nonzero;
  }
  std::vector<std::complex<double>> out(static_cast<std::size_t>(levels));
  std::complex<double> lower = 1.0;
  for (int s = 0; s < levels; ++s) {
    out[static_cast<std::size_t>(s)] = lead_sum[static_cast<std::size_t>(s)] * lower;
    lower *= digit_sum[static_cast<std::size_t>(s)];
  }
  return out;
}

/// sum_{1 <= k < b^levels} wal_k(a / b^m) b^(-alpha floor(log_b k)).
inline double walsh_series(std::uint64_t a, int m, unsigned b, double alpha, int levels) {
  const auto sums = walsh_level_sums(a, m, b, levels);
  double total = 0.0;
  for (int s = 0; s < levels; ++s) total += sums[static_cast<std::size_t>(s)].real() * std::pow(b, -alpha * s);
  return total;
}

/// Same partial sum, term by term.
inline double walsh_series_direct(std::uint64_t a, int m, unsigned b, double alpha, std::uint64_t k_end) {
  double total = 0.0;
  std::uint64_t next = b;
  int s = 0;
  for (std::uint64_t k = 1; k < k_end; ++k) {
    if (k == next) {
      ++s;
      next *= b;
    }
    total += walsh(k, a, m, b).real() * std::pow(b, -alpha * s);
  }
  return total;
}

/// sum_{k >= b^levels} b^(-alpha floor(log_b k)).
inline double walsh_tail(unsigned b, double alpha, int levels) {
  const double beta = std::pow(b, 1.0 - alpha);
  return (b - 1.0) * std::pow(beta, levels) / (1.0 - beta);
}

/// sum over nonzero k in {0..b^m-1}^d with sum_j k_j g_j = 0 mod p of gamma(u(k)) / r_alpha(k).
inline double dual_sum(const std::vector<std::uint64_t>& g, std::uint64_t p, unsigned b, int m, double alpha,
                       const std::function<double(std::uint64_t)>& gamma) {
  const std::size_t d = g.size();
  std::uint64_t box = 1;
  for (int i = 0; i < m; ++i) box *= b;
  const Poly pp = decode(p, b);
  std::vector<std::uint64_t> k(d, 0);
  double total = 0.0;
  while (true) {
    std::size_t j = 0;
    while (j < d && ++k[j] == box) k[j++] = 0;
    if (j == d) break;
    Poly acc;
    for (std::size_t i = 0; i < d; ++i) acc = add(acc, mul(decode(k[i], b), decode(g[i], b), b), b);
    if (!mod(acc, pp, b).empty()) continue;
    std::uint64_t mask = 0;
    double r = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (!k[i]) continue;
      mask |= std::uint64_t{1} << i;
      r *= std::pow(b, alpha * (digit_count(k[i], b) - 1));
    }
    total += gamma(mask) / r;
  }
  return total;
}

/// K by direct summation over points built from the long-division numerators.
inline double quality_K(const std::vector<std::uint64_t>& g, std::uint64_t p, unsigned b, int m,
                        const std::function<double(std::uint64_t)>& gamma) {
  const std::size_t d = g.size();
  std::uint64_t n_points = 1;
  for (int i = 0; i < m; ++i) n_points *= b;
  double total = 0.0;
  std::vector<double> w(d);
  for (std::uint64_t n = 1; n < n_points; ++n) {
    for (std::size_t j = 0; j < d; ++j) w[j] = omega(numerator(n, g[j], p, b, m), m, b);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
      double prod = gamma(mask);
      for (std::size_t j = 0; j < d; ++j)
        if (mask >> j & 1) prod *= w[j];
      total += prod;
    }
  }
  return total;
}

}  // namespace oracle
