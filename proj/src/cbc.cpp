#include "polylat/cbc.hpp"

#include <chrono>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "polylat/convolution.hpp"
#include "polylat/error.hpp"
#include "polylat/kernels.hpp"
#include "polylat/parallel.hpp"

namespace polylat::cbc {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Setup {
  Modulus p;
  kernels::KernelTable kernel;
  bool include_zero;
  double norm;
};

Setup prepare(const Config& cfg) {
  cfg.validate();
  Modulus p = cfg.modulus ? Modulus(PolyB::from_encoding(cfg.b, *cfg.modulus)) : find_irreducible(cfg.b, cfg.m);
  if (p.degree() != cfg.m) fail(ErrorCode::invalid_argument, "modulus degree differs from m");
  if (cfg.criterion == Criterion::K)
    return {p, kernels::KernelTable(kernels::Kind::omega, cfg.b, cfg.m), false, 1.0};
  return {p, kernels::KernelTable(kernels::Kind::phi, cfg.b, cfg.m, cfg.alpha), true, 1.0 / static_cast<double>(p.size())};
}

Result empty_result(const Config& cfg, const Modulus& p) {
  Result r(GeneratingVector{cfg.b, cfg.m, {}}, p);
  r.criterion = cfg.criterion;
  r.engine = cfg.engine;
  if (cfg.criterion == Criterion::wce) r.alpha = cfg.alpha;
  r.scores.resize(cfg.d);
  return r;
}

// Smallest encoding whose score is within tolerance of the minimum; scores[c - 1].
std::uint64_t select(const std::vector<double>& scores, double tie_tolerance) {
  double lo = std::numeric_limits<double>::infinity(), scale = 0.0;
  for (double s : scores) {
    lo = std::min(lo, s);
    scale = std::max(scale, std::abs(s));
  }
  const double threshold = lo + tie_tolerance * std::max(scale, std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] <= threshold) return i + 1;
  fail(ErrorCode::internal, "no candidate selected (non-finite scores)");
}

double sum_range(const std::vector<double>& excess, bool include_zero) {
  CompensatedSum s;
  for (std::size_t n = include_zero ? 0 : 1; n < excess.size(); ++n) s.add(excess[n]);
  return s.value();
}

void finish(Result& r, const Config& cfg) {
  if (cfg.audit && cfg.criterion == Criterion::K) r.audit = audit(r, cfg.weights);
}

}  // namespace

const char* name(Criterion c) noexcept { return c == Criterion::K ? "K" : "wce"; }
const char* name(Engine e) noexcept { return e == Engine::naive ? "naive" : "fast"; }

Criterion parse_criterion(const std::string& text) {
  if (text == "K") return Criterion::K;
  if (text == "wce" || text == "WCE" || text == "e") return Criterion::wce;
  fail(ErrorCode::invalid_argument, "unknown construction criterion '" + text + "' (expected K or wce)");
}

Engine parse_engine(const std::string& text) {
  if (text == "naive") return Engine::naive;
  if (text == "fast") return Engine::fast;
  fail(ErrorCode::invalid_argument, "unknown engine '" + text + "' (expected naive or fast)");
}

void Config::validate() const {
  require(is_prime(b), "base b must be prime");
  require(m >= 1, "m must be >= 1");
  require(d >= 1, "d must be >= 1");
  if (weights.dimension() != d)
    fail(ErrorCode::invalid_argument, "weights have dimension " + std::to_string(weights.dimension()) + ", expected d = " +
                                          std::to_string(d));
  if (criterion == Criterion::wce && !(alpha > 1.0)) fail(ErrorCode::invalid_argument, "wce criterion needs alpha > 1");
  if (engine == Engine::fast && !weights.is_product())
    fail(ErrorCode::invalid_argument, "the fast engine requires product weights");
  if (!weights.is_product() && d > WeightSystem::max_subset_dimension)
    fail(ErrorCode::scale_exceeded, "subset weights are limited to d <= 12");
  require(tie_tolerance >= 0.0, "tie tolerance must be >= 0");
  double n = std::pow(static_cast<double>(b), m);
  if (n > static_cast<double>(std::uint64_t{1} << 30))
    fail(ErrorCode::scale_exceeded, "b^m above 2^30 is not supported");
}

Result construct(const Config& cfg) {
  return cfg.engine == Engine::naive ? construct_naive(cfg) : construct_fast(cfg);
}

Result construct_naive(const Config& cfg) {
  const Setup st = prepare(cfg);
  Result r = empty_result(cfg, st.p);
  const LaurentMap map(st.p);
  const std::uint64_t n_points = st.p.size();
  const auto& table = st.kernel.levels();
  const std::size_t first = st.include_zero ? 0 : 1;
  const bool product = cfg.weights.is_product();

  std::vector<double> excess(n_points, 0.0);            // product weights
  std::vector<std::vector<std::uint8_t>> chosen_levels;  // subset weights
  std::vector<double> gam;
  if (!product) {
    gam.resize(std::size_t{1} << cfg.d);
    for (std::size_t mask = 1; mask < gam.size(); ++mask) gam[mask] = cfg.weights.gamma(mask);
  }
  double value = 0.0;

  for (std::size_t s = 0; s < cfg.d; ++s) {
    const auto t0 = Clock::now();
    std::uint64_t pick = 1;
    // amp[n]: coefficient of kernel(x_{n,s}) in the criterion
    std::vector<double> amp(n_points, 0.0);
    double base;
    if (product) {
      const double g = cfg.weights.gamma_j(s);
      for (std::uint64_t n = first; n < n_points; ++n) amp[n] = g * (1.0 + excess[n]);
      base = st.norm * sum_range(excess, st.include_zero);
    } else {
      const std::size_t masks = std::size_t{1} << s;
      std::vector<double> prodv(masks);
      const std::uint64_t bit = std::uint64_t{1} << s;
      for (std::uint64_t n = first; n < n_points; ++n) {
        prodv[0] = 1.0;
        double a = gam[bit];
        for (std::size_t v = 1; v < masks; ++v) {
          const int low = __builtin_ctzll(v);
          prodv[v] = prodv[v & (v - 1)] * table[chosen_levels[low][n]];
          a += gam[v | bit] * prodv[v];
        }
        amp[n] = a;
      }
      base = value;
    }

    auto score_of = [&](std::uint64_t c) {
      ColumnStream stream(map, c, first);
      CompensatedSum sum;
      for (std::uint64_t n = first; n < n_points; ++n, stream.advance()) sum.add(amp[n] * table[stream.level()]);
      return base + st.norm * sum.value();
    };

    if (s == 0) {
      value = score_of(1);
    } else {
      std::vector<double> scores(n_points - 1);
      constexpr std::size_t block = 64;
      parallel_for((scores.size() + block - 1) / block, [&](std::size_t blk) {
        const std::size_t hi = std::min(scores.size(), (blk + 1) * block);
        for (std::size_t i = blk * block; i < hi; ++i) scores[i] = score_of(i + 1);
      });
      pick = select(scores, cfg.tie_tolerance);
      value = scores[pick - 1];
      if (cfg.record_scores) r.scores[s] = std::move(scores);
    }

    std::vector<std::uint8_t> lv(n_points);
    ColumnStream stream(map, pick);
    for (std::uint64_t n = 0; n < n_points; ++n, stream.advance()) lv[n] = static_cast<std::uint8_t>(stream.level());
    if (product) {
      const double g = cfg.weights.gamma_j(s);
      for (std::uint64_t n = first; n < n_points; ++n) excess[n] += g * table[lv[n]] * (1.0 + excess[n]);
      value = st.norm * sum_range(excess, st.include_zero);
    } else {
      chosen_levels.push_back(std::move(lv));
    }
    r.g.components.push_back(pick);
    r.values.push_back(value);
    r.seconds.push_back(elapsed(t0));
  }
  finish(r, cfg);
  return r;
}

Result construct_fast(const Config& cfg) {
  const Setup st = prepare(cfg);
  if (!cfg.weights.is_product()) fail(ErrorCode::invalid_argument, "the fast engine requires product weights");
  Result r = empty_result(cfg, st.p);
  const auto t_setup = Clock::now();
  const LaurentMap map(st.p);
  const ResidueTables tables(st.p);
  const auto exp = tables.exp();
  const auto log = tables.log();
  const std::size_t len = exp.size();  // b^m - 1
  const auto& table = st.kernel.levels();
  const double k0 = st.include_zero ? table[0] : 0.0;

  // w[k] = kernel(v_m(xi^k / p))
  std::vector<double> w(len);
  for (std::size_t k = 0; k < len; ++k) w[k] = table[map.packer().level(map.of_residue(exp[k]))];
  const CirculantConvolver conv(w);

  // Q[i] = excess at the point n = xi^i; zero_excess at n = 0
  std::vector<double> q(len, 0.0), a(len), c(len), scores(len);
  double zero_excess = 0.0;
  auto total = [&] {
    CompensatedSum s;
    if (st.include_zero) s.add(zero_excess);
    for (double x : q) s.add(x);
    return st.norm * s.value();
  };
  double setup_seconds = elapsed(t_setup);

  for (std::size_t s = 0; s < cfg.d; ++s) {
    const auto t0 = Clock::now();
    const double g = cfg.weights.gamma_j(s);
    std::uint64_t pick = 1;
    if (s > 0) {
      const double base = total();
      a[0] = 1.0 + q[0];
      for (std::size_t t = 1; t < len; ++t) a[t] = 1.0 + q[len - t];
      conv.apply(a, c);
      const double z = k0 * (1.0 + zero_excess);
      for (std::size_t j = 0; j < len; ++j) scores[exp[j] - 1] = base + st.norm * g * (c[j] + z);
      pick = select(scores, cfg.tie_tolerance);
      if (cfg.record_scores) r.scores[s] = scores;
    }
    const std::size_t shift = log[pick];
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t k = i + shift;
      if (k >= len) k -= len;
      q[i] += g * w[k] * (1.0 + q[i]);
    }
    if (st.include_zero) zero_excess += g * k0 * (1.0 + zero_excess);
    r.g.components.push_back(pick);
    r.values.push_back(total());
    r.seconds.push_back(elapsed(t0) + (s == 0 ? setup_seconds : 0.0));
  }
  finish(r, cfg);
  return r;
}

std::vector<criteria::CriterionReport> audit(const Result& result, const WeightSystem& weights) {
  std::vector<criteria::CriterionReport> out;
  const std::uint32_t b = result.p.base();
  const int m = result.p.degree();
  const std::size_t d = result.g.dimension();
  require(weights.dimension() == d, "audit weights differ in dimension");
  for (std::size_t s = 1; s <= d; ++s) {
    const auto ws = weights.prefix(s);
    criteria::CriterionReport rep;
    rep.criterion = "K";
    rep.value = result.values.at(s - 1);
    rep.bound = criteria::theorem_bound(criteria::BoundKind::cbc_K, b, m, ws);
    rep.b = b;
    rep.m = m;
    rep.d = s;
    rep.weights = weights.description();
    out.push_back(rep);
  }
  if (m >= 4) out.push_back(criteria::report(criteria::Criterion::T_gamma, result.g, result.p, 1.0, weights));
  return out;
}

bool Result::audit_passed() const noexcept {
  for (const auto& rep : audit)
    if (!rep.satisfied()) return false;
  return true;
}

std::string Result::to_json() const {
  nlohmann::ordered_json j;
  j["b"] = p.base();
  j["m"] = p.degree();
  j["d"] = g.dimension();
  j["modulus_enc"] = p.encoding();
  j["g_enc"] = g.components;
  j["criterion"] = name(criterion);
  j["alpha"] = alpha ? nlohmann::ordered_json(*alpha) : nlohmann::ordered_json(nullptr);
  j["engine"] = name(engine);
  j["per_step_values"] = values;
  j["seconds_per_step"] = seconds;
  auto reports = nlohmann::ordered_json::array();
  for (const auto& rep : audit) reports.push_back(nlohmann::ordered_json::parse(rep.to_json()));
  j["audit"] = reports;
  j["audit_passed"] = audit_passed();
  return j.dump();
}

std::string Result::vector_line() const {
  std::ostringstream out;
  out << p.base() << ' ' << p.degree() << ' ' << p.encoding();
  for (auto c : g.components) out << ' ' << c;
  return out.str();
}

VectorFile parse_vector_line(const std::string& text) {
  std::istringstream in(text);
  long long b = 0, m = 0;
  unsigned long long penc = 0;
  if (!(in >> b >> m >> penc) || b < 2 || m < 1)
    fail(ErrorCode::invalid_argument, "vector file must start with 'b m enc(p)'");
  const auto base = static_cast<std::uint32_t>(b);
  Modulus p(PolyB::from_encoding(base, penc));
  if (p.degree() != m) fail(ErrorCode::invalid_argument, "modulus degree differs from m in vector file");
  GeneratingVector g{base, static_cast<int>(m), {}};
  unsigned long long c;
  while (in >> c) g.components.push_back(c);
  if (!in.eof()) fail(ErrorCode::invalid_argument, "malformed component in vector file");
  g.validate(p);
  return {g, p};
}

double memory_estimate(const Config& cfg) {
  const double n = std::pow(static_cast<double>(cfg.b), cfg.m);
  double bytes;
  if (cfg.engine == Engine::fast) {
    bytes = n * (5 * 8 + 8) + 4.0 * n * 16.0 * 2.0;  // vectors, tables, two padded spectra
  } else {
    bytes = n * 16.0 + (cfg.weights.is_product() ? 0.0 : n * static_cast<double>(cfg.d));
  }
  if (cfg.record_scores) bytes += n * 8.0 * static_cast<double>(cfg.d);
  return bytes;
}

}  // namespace polylat::cbc
