#include <random>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "polylat/criteria.hpp"
#include "polylat/error.hpp"

using namespace polylat;
namespace cr = polylat::criteria;

namespace {

GeneratingVector random_vector(std::mt19937_64& rng, unsigned b, int m, std::size_t d) {
  std::uint64_t n = 1;
  for (int i = 0; i < m; ++i) n *= b;
  std::uniform_int_distribution<std::uint64_t> pick(1, n - 1);
  GeneratingVector g{b, m, {}};
  for (std::size_t j = 0; j < d; ++j) g.components.push_back(pick(rng));
  return g;
}

WeightSystem random_subset(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> by(std::size_t{1} << d, 0.0);
  for (std::size_t m = 1; m < by.size(); ++m) by[m] = u(rng);
  return WeightSystem::subset(d, by);
}

}  // namespace

TEST_CASE("K examples") {
  const Modulus p(PolyB::parse(2, "x^2+x+1"));
  CHECK(cr::quality_K(GeneratingVector{2, 2, {1}}, p, WeightSystem::product({1.0})) == -2.0);
  for (unsigned b : {2u, 3u, 5u})
    for (int m = 1; m <= 5; ++m)
      CHECK(cr::quality_K(GeneratingVector{b, m, {1}}, find_irreducible(b, m), WeightSystem::product({0.7})) ==
            doctest::Approx(-0.7 * (b - 1) * m).epsilon(1e-12));
  const auto p3 = find_irreducible(2, 3);
  const auto one = [](std::uint64_t) { return 1.0; };
  CHECK(cr::quality_K(GeneratingVector{2, 3, {1, 2}}, p3, WeightSystem::product({1.0, 1.0})) ==
        doctest::Approx(oracle::quality_K({1, 2}, p3.encoding(), 2, 3, one)).epsilon(1e-14));
  CHECK_THROWS_WITH(cr::quality_K(GeneratingVector{2, 3, {1, 0}}, p3, WeightSystem::product({1.0, 1.0})),
                    doctest::Contains("zero"));
}

TEST_CASE("K agrees with the direct oracle for both weight kinds") {
  std::mt19937_64 rng(21);
  for (unsigned b : {2u, 3u})
    for (int m : {2, 3, 4})
      for (std::size_t d : {1, 2, 3}) {
        const auto p = find_irreducible(b, m);
        const auto g = random_vector(rng, b, m, d);
        const auto w = WeightSystem::parse("product:j^-1", d);
        const auto s = random_subset(rng, d);
        const auto pw = [&](std::uint64_t mask) { return w.gamma(mask); };
        const auto sw = [&](std::uint64_t mask) { return s.gamma(mask); };
        CHECK(cr::quality_K(g, p, w) == doctest::Approx(oracle::quality_K(g.components, p.encoding(), b, m, pw)));
        CHECK(cr::quality_K(g, p, s) == doctest::Approx(oracle::quality_K(g.components, p.encoding(), b, m, sw)));
      }
}

TEST_CASE("T examples") {
  const Modulus p(PolyB::parse(2, "x^2+x+1"));
  CHECK(std::abs(cr::t_gamma(GeneratingVector{2, 2, {1}}, p, WeightSystem::product({1.0}))) < 1e-15);
  CHECK(std::abs(cr::t_alpha_gamma(GeneratingVector{2, 2, {1}}, p, 2.0, WeightSystem::product({1.0}))) < 1e-15);
  const GeneratingVector g{2, 2, {1, 2}};
  const auto one = [](std::uint64_t) { return 1.0; };
  CHECK(cr::t_gamma(g, p, WeightSystem::product({1.0, 1.0})) ==
        doctest::Approx(oracle::dual_sum({1, 2}, 7, 2, 2, 1.0, one)).epsilon(1e-14));
  std::mt19937_64 rng(2);
  const auto s = random_subset(rng, 2);
  std::vector<double> scaled(4);
  for (std::size_t m = 1; m < 4; ++m) scaled[m] = 3.0 * s.gamma(m);
  CHECK(cr::t_gamma(g, p, WeightSystem::subset(2, scaled)) == doctest::Approx(3.0 * cr::t_gamma(g, p, s)));
}

TEST_CASE("dual box enumeration") {
  const Modulus p(PolyB::parse(2, "x^2+x+1"));
  CHECK(cr::enumerate_dual_box(GeneratingVector{2, 2, {3}}, p).size() == 1);
  const auto box = cr::enumerate_dual_box(GeneratingVector{2, 2, {1, 1}}, p);
  CHECK(box == std::vector<std::vector<std::uint64_t>>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  std::mt19937_64 rng(4);
  for (int m = 1; m <= 4; ++m)
    for (std::size_t d = 1; d <= 3; ++d) {
      const auto g = random_vector(rng, 2, m, d);
      CHECK(cr::enumerate_dual_box(g, find_irreducible(2, m)).size() == (std::size_t{1} << (m * (d - 1))));
    }
  CHECK_THROWS_WITH(cr::enumerate_dual_box(GeneratingVector{2, 9, {1, 1, 1}}, find_irreducible(2, 9)),
                    doctest::Contains("oracle scale exceeded"));
}

TEST_CASE("T and T_alpha match enumeration for both weight kinds") {
  std::mt19937_64 rng(8);
  for (int m : {2, 3, 4})
    for (std::size_t d : {1, 2, 3}) {
      const auto p = find_irreducible(2, m);
      for (int trial = 0; trial < 5; ++trial) {
        const auto g = random_vector(rng, 2, m, d);
        const auto w = WeightSystem::parse("product:j^-2", d);
        const auto s = random_subset(rng, d);
        for (double alpha : {1.0, 1.5, 3.0}) {
          const auto pw = [&](std::uint64_t mask) { return w.gamma(mask); };
          const auto sw = [&](std::uint64_t mask) { return s.gamma(mask); };
          CHECK(std::abs(cr::t_alpha_gamma(g, p, alpha, w) -
                         oracle::dual_sum(g.components, p.encoding(), 2, m, alpha, pw)) < 1e-12);
          CHECK(std::abs(cr::t_alpha_gamma(g, p, alpha, s) -
                         oracle::dual_sum(g.components, p.encoding(), 2, m, alpha, sw)) < 1e-12);
          CHECK(std::abs(cr::dual_box_sum(g, p, alpha, s) - cr::t_alpha_gamma(g, p, alpha, s)) < 1e-12);
        }
      }
    }
}

TEST_CASE("Jensen relation between T_alpha and T") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 4 + trial % 2;
    const std::size_t d = 2 + trial % 3 / 2;
    const auto p = find_irreducible(2, m);
    const auto g = random_vector(rng, 2, m, d);
    const auto w = WeightSystem::parse("product:j^-1", d);
    for (double alpha : {1.5, 2.0, 3.0})
      CHECK(cr::t_alpha_gamma(g, p, alpha, w.pow(alpha)) <= std::pow(cr::t_gamma(g, p, w), alpha) * (1 + 1e-12));
  }
}

TEST_CASE("worst-case error") {
  const Modulus p(PolyB::parse(2, "x^2+x+1"));
  CHECK(std::abs(cr::wce(GeneratingVector{2, 2, {1}}, p, 2.0, WeightSystem::product({1.0})) - 0.125) < 1e-12);
  CHECK_THROWS_AS(cr::wce(GeneratingVector{2, 2, {1}}, p, 1.0, WeightSystem::product({1.0})), Error);
  double previous = 1e300;
  for (double c : {1.0, 0.1, 0.01, 0.001}) {
    const double e = cr::wce(GeneratingVector{2, 2, {1, 2}}, p, 2.0, WeightSystem::product({c, c}));
    CHECK(e < previous);
    CHECK(e > 0.0);
    previous = e;
  }
}

TEST_CASE("worst-case error against capped dual-net enumeration") {
  std::mt19937_64 rng(17);
  for (int m : {2, 3, 4})
    for (std::size_t d : {1, 2, 3}) {
      const auto p = find_irreducible(2, m);
      const auto g = random_vector(rng, 2, m, d);
      const auto w = WeightSystem::parse("product:j^-2", d);
      const auto s = random_subset(rng, d);
      for (double alpha : {1.5, 2.0, 3.0}) {
        for (const auto* ws : {&w, &s}) {
          const double e = cr::wce(g, p, alpha, *ws);
          const auto en = cr::wce_by_enumeration(g, p, alpha, *ws, 6);
          CHECK(en.tail >= 0.0);
          CHECK(e - en.partial >= -1e-12);
          CHECK(e - en.partial <= en.tail + 1e-12);
          const double t = cr::t_alpha_gamma(g, p, alpha, *ws);
          CHECK(e - t >= -1e-12);
          CHECK(e - t <= cr::theorem_bound(cr::BoundKind::trunc, 2, m, *ws, alpha) + 1e-12);
        }
      }
    }
}

TEST_CASE("bound calculators") {
  const auto one = WeightSystem::product({1.0});
  CHECK(cr::theorem_bound(cr::BoundKind::existence_T, 2, 2, one) == 0.5);
  CHECK(cr::theorem_bound(cr::BoundKind::trunc, 2, 2, one, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cr::theorem_bound(cr::BoundKind::cbc_K, 2, 2, one) == 2.0);
  CHECK(cr::theorem_bound(cr::BoundKind::cbc_T, 2, 4, one) == doctest::Approx((2.0 * 4 + 8 * (8 + 4)) / 16.0));
  CHECK(cr::parse_bound_kind("cbc_T") == cr::BoundKind::cbc_T);
  CHECK_THROWS_AS(cr::parse_bound_kind("nope"), Error);
}

TEST_CASE("reports") {
  const Modulus p(PolyB::parse(2, "x^2+x+1"));
  const auto r = cr::report(cr::Criterion::wce, GeneratingVector{2, 2, {1}}, p, 2.0, WeightSystem::parse("product:1", 1));
  CHECK(r.satisfied());
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["criterion"] == "wce");
  CHECK(j["value"].get<double>() == doctest::Approx(0.125));
  CHECK(j["alpha"].get<double>() == 2.0);
  CHECK(j["satisfied"] == true);
  CHECK(j["weights"] == "product:1");
  for (const char* key : {"bound", "b", "m", "d"}) CHECK(j.contains(key));
  const auto t = cr::report(cr::Criterion::T_alpha, GeneratingVector{2, 2, {1}}, p, 2.0, WeightSystem::product({1.0}));
  CHECK_FALSE(t.has_bound());
  CHECK(t.satisfied());
  CHECK(cr::parse_criterion("K") == cr::Criterion::K);
}
