#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "polylat/error.hpp"
#include "polylat/ffpoly.hpp"

using namespace polylat;

TEST_CASE("parse accepts encodings and human form") {
  CHECK(PolyB::parse(2, "7").encoding() == 7);
  CHECK(PolyB::parse(2, "x^2+x+1").encoding() == 7);
  CHECK(PolyB::parse(3, "2x^3 + 1").encoding() == 2 * 27 + 1);
  CHECK(PolyB::parse(2, "x^2+x+1").to_string() == "x^2+x+1");
  CHECK_THROWS_AS(PolyB::parse(2, "x^^2"), Error);
  CHECK_THROWS_AS(PolyB(4), Error);
}

TEST_CASE("ring operations agree with schoolbook arithmetic") {
  std::mt19937_64 rng(7);
  for (unsigned b : {2u, 3u, 5u}) {
    std::uniform_int_distribution<std::uint64_t> pick(0, 2000);
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = pick(rng), y = pick(rng) + 1;
      const auto px = PolyB::from_encoding(b, x), py = PolyB::from_encoding(b, y);
      CHECK((px * py).encoding() == oracle::encode(oracle::mul(oracle::decode(x, b), oracle::decode(y, b), b), b));
      CHECK((px + py).encoding() == oracle::encode(oracle::add(oracle::decode(x, b), oracle::decode(y, b), b), b));
      const auto qr = divmod(px, py);
      oracle::Poly q, r;
      oracle::divide(oracle::decode(x, b), oracle::decode(y, b), b, q, r);
      CHECK(qr.quotient.encoding() == oracle::encode(q, b));
      CHECK(qr.remainder.encoding() == oracle::encode(r, b));
      CHECK(qr.quotient * py + qr.remainder == px);
      CHECK((px - py) + py == px);
    }
  }
}

TEST_CASE("division by zero is a domain error") {
  try {
    divmod(PolyB::from_encoding(2, 5), PolyB(2));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
}

TEST_CASE("gcd is monic") {
  const auto a = PolyB::parse(3, "x^2+2");  // (x+1)(x+2)
  const auto c = PolyB::parse(3, "2x+2");
  CHECK(gcd(a, c).to_string() == "x+1");
}

TEST_CASE("irreducibility matches trial division oracle") {
  for (unsigned b : {2u, 3u}) {
    for (std::uint64_t e = b; e < 500; ++e) {
      const auto p = PolyB::from_encoding(b, e);
      CHECK(is_irreducible(p) == oracle::irreducible(oracle::decode(e, b), b));
    }
  }
  CHECK(is_irreducible(PolyB::parse(2, "x^2+x+1")));
  CHECK_FALSE(is_irreducible(PolyB::parse(2, "x^2+1")));
}

TEST_CASE("find_irreducible returns the smallest monic irreducible") {
  CHECK(find_irreducible(2, 2).encoding() == 7);
  CHECK(find_irreducible(2, 3).encoding() == 11);
  CHECK(find_irreducible(2, 4).encoding() == 19);
  for (unsigned b : {2u, 3u, 5u}) {
    for (int m = 1; m <= 6; ++m) {
      const auto p = find_irreducible(b, m);
      CHECK(p.degree() == m);
      CHECK(p.poly().leading() == 1);
      std::uint64_t lo = 1;
      for (int i = 0; i < m; ++i) lo *= b;
      for (std::uint64_t e = lo; e < p.encoding(); ++e)
        if (e / lo == 1) CHECK_FALSE(oracle::irreducible(oracle::decode(e, b), b));
    }
  }
  CHECK_THROWS_AS(find_irreducible(2, 0), Error);
}

TEST_CASE("residue arithmetic") {
  const auto p = find_irreducible(3, 4);
  for (std::uint64_t a = 0; a < 81; a += 7)
    for (std::uint64_t c = 0; c < 81; c += 5) {
      const auto want = oracle::encode(
          oracle::mod(oracle::mul(oracle::decode(a, 3), oracle::decode(c, 3), 3), oracle::decode(p.encoding(), 3), 3), 3);
      CHECK(mul_mod(a, c, p) == want);
    }
  CHECK(pow_mod(2, 80, p) == 1);
}

TEST_CASE("Laurent digits agree with the long-division oracle") {
  const auto p = Modulus(PolyB::parse(2, "x^2+x+1"));
  CHECK(laurent_digits(PolyB::from_encoding(2, 1), p) == std::vector<std::uint32_t>{0, 1});
  for (unsigned b : {2u, 3u, 5u}) {
    const auto q = find_irreducible(b, 4);
    for (std::uint64_t n = 0; n < q.size(); ++n)
      CHECK(laurent_numerator(PolyB::from_encoding(b, n), q) == oracle::numerator(n, 1, q.encoding(), b, 4));
  }
}

TEST_CASE("prime factors") {
  CHECK(prime_factors(1) == std::vector<std::uint64_t>{});
  CHECK(prime_factors(255) == std::vector<std::uint64_t>{3, 5, 17});
  CHECK(prime_factors(1ULL << 20) == std::vector<std::uint64_t>{2});
}

TEST_CASE("exp and log tables are inverse bijections") {
  for (unsigned b : {2u, 3u, 5u}) {
    const auto p = find_irreducible(b, 3);
    ResidueTables t(p);
    CHECK(t.order() == p.size() - 1);
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < t.order(); ++i) {
      const auto e = t.exp()[i];
      CHECK(e != 0);
      CHECK_FALSE(seen[e]);
      seen[e] = true;
      CHECK(t.log()[e] == i);
      if (i + 1 < t.order()) CHECK(t.exp()[i + 1] == mul_mod(e, t.generator(), p));
    }
    CHECK(find_primitive_element(p) == t.generator());
  }
}
