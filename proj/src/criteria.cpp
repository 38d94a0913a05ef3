#include "polylat/criteria.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>

#include "polylat/error.hpp"
#include "polylat/parallel.hpp"

namespace polylat::criteria {
namespace {

constexpr std::uint64_t chunk_points = 8192;
constexpr std::uint64_t oracle_limit = std::uint64_t{1} << 24;

void check_inputs(const GeneratingVector& g, const Modulus& p, const WeightSystem& w) {
  g.validate(p);
  if (!g.all_nonzero()) fail(ErrorCode::invalid_argument, "generating vector has a zero component");
  if (w.dimension() != g.dimension())
    fail(ErrorCode::invalid_argument, "weights have dimension " + std::to_string(w.dimension()) +
                                          " but the generating vector has " + std::to_string(g.dimension()));
}

std::uint64_t add_residues(std::uint64_t x, std::uint64_t y, std::uint32_t b) {
  if (b == 2) return x ^ y;
  std::uint64_t out = 0, place = 1;
  while (x || y) {
    out += ((x % b + y % b) % b) * place;
    x /= b;
    y /= b;
    place *= b;
  }
  return out;
}

// k_j(x) g_j(x) mod p for all k < b^m, by schoolbook multiplication and division
std::vector<std::uint64_t> residue_products(std::uint64_t gj, const Modulus& p) {
  const auto gpoly = PolyB::from_encoding(p.base(), gj);
  std::vector<std::uint64_t> out(p.size());
  for (std::uint64_t k = 0; k < p.size(); ++k)
    out[k] = divmod(PolyB::from_encoding(p.base(), k) * gpoly, p.poly()).remainder.encoding();
  return out;
}

void check_oracle_scale(const Modulus& p, std::size_t d) {
  double cells = std::pow(static_cast<double>(p.size()), static_cast<double>(d));
  if (cells > static_cast<double>(oracle_limit)) fail(ErrorCode::scale_exceeded, "oracle scale exceeded");
}

// Walk all residue vectors in the dual box, calling visit(k) on members.
template <class Visit>
void for_each_dual(const GeneratingVector& g, const Modulus& p, Visit&& visit) {
  const std::size_t d = g.dimension();
  check_oracle_scale(p, d);
  std::vector<std::vector<std::uint64_t>> prod(d);
  for (std::size_t j = 0; j < d; ++j) prod[j] = residue_products(g.components[j], p);
  std::vector<std::uint64_t> k(d, 0);
  const std::uint32_t b = p.base();
  while (true) {
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < d; ++j) r = add_residues(r, prod[j][k[j]], b);
    if (r == 0) visit(k);
    std::size_t j = 0;
    while (j < d && ++k[j] == p.size()) k[j++] = 0;
    if (j == d) break;
  }
}


double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 32) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace

const char* name(Criterion c) noexcept {
  switch (c) {
    case Criterion::K: return "K";
    case Criterion::T_gamma: return "T_gamma";
    case Criterion::T_alpha: return "T_alpha_gamma";
    case Criterion::wce: return "wce";
  }
  return "?";
}

Criterion parse_criterion(const std::string& text) {
  if (text == "K") return Criterion::K;
  if (text == "T" || text == "T_gamma") return Criterion::T_gamma;
  if (text == "Talpha" || text == "T_alpha" || text == "T_alpha_gamma") return Criterion::T_alpha;
  if (text == "wce" || text == "WCE" || text == "e") return Criterion::wce;
  fail(ErrorCode::invalid_argument, "unknown criterion '" + text + "' (expected K, T, Talpha or wce)");
}

double point_sum(const GeneratingVector& g, const Modulus& p, const WeightSystem& w, const kernels::KernelTable& kernel,
                 bool include_zero, bool normalize) {
  check_inputs(g, p, w);
  require(kernel.base() == p.base() && kernel.m() == p.degree(), "kernel table does not match the modulus");
  if (include_zero && !kernel.zero_valid()) fail(ErrorCode::domain, "L-kernel undefined at 0");
  const std::size_t d = g.dimension();
  if (!w.is_product() && d > WeightSystem::max_subset_dimension)
    fail(ErrorCode::scale_exceeded, "subset weights are limited to d <= 12");

  const LaurentMap map(p);
  const std::uint64_t n_points = p.size();
  const auto& table = kernel.levels();

  if (w.is_product() && d == 1) {
    // one coordinate: the sum only needs the level histogram, which is exact in integers
    constexpr std::uint64_t span = std::uint64_t{1} << 22;
    const std::uint64_t spans = (n_points + span - 1) / span;
    std::vector<std::vector<std::uint64_t>> counts(spans, std::vector<std::uint64_t>(table.size(), 0));
    parallel_for(spans, [&](std::size_t c) {
      const std::uint64_t start = c * span;
      ColumnStream(map, g.components[0], start).count_levels(counts[c].data(), std::min(span, n_points - start));
    });
    std::vector<std::uint64_t> total(table.size(), 0);
    for (const auto& part : counts)
      for (std::size_t l = 0; l < table.size(); ++l) total[l] += part[l];
    if (!include_zero) --total[0];
    CompensatedSum sum;
    for (std::size_t l = 0; l < table.size(); ++l)
      if (total[l]) sum.add(static_cast<double>(total[l]) * (w.gamma_j(0) * table[l]));
    return normalize ? sum.value() / static_cast<double>(n_points) : sum.value();
  }

  const std::uint64_t chunks = (n_points + chunk_points - 1) / chunk_points;
  std::vector<CompensatedSum> partial(chunks);

  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t start = c * chunk_points;
    const std::uint64_t len = std::min(chunk_points, n_points - start);
    CompensatedSum sum;
    std::vector<std::uint8_t> lv(len);
    if (w.is_product()) {
      std::vector<double> excess(len, 0.0), scaled(table.size());
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t l = 0; l < table.size(); ++l) scaled[l] = w.gamma_j(j) * table[l];
        ColumnStream(map, g.components[j], start).fill_levels(lv.data(), len);
        for (std::uint64_t i = 0; i < len; ++i) excess[i] += scaled[lv[i]] * (1.0 + excess[i]);
      }
      if (!include_zero && start == 0) excess[0] = 0.0;
      sum.add(pairwise_sum(excess));
    } else {
      std::vector<double> kv(d * len);
      for (std::size_t j = 0; j < d; ++j) {
        ColumnStream(map, g.components[j], start).fill_levels(lv.data(), len);
        for (std::uint64_t i = 0; i < len; ++i) kv[j * len + i] = table[lv[i]];
      }
      const std::size_t masks = std::size_t{1} << d;
      std::vector<double> prodv(masks);
      std::vector<double> gam(masks);
      for (std::size_t mask = 1; mask < masks; ++mask) gam[mask] = w.gamma(mask);
      for (std::uint64_t i = 0; i < len; ++i) {
        if (!include_zero && start + i == 0) continue;
        prodv[0] = 1.0;
        double point = 0.0;
        for (std::size_t mask = 1; mask < masks; ++mask) {
          const int low = __builtin_ctzll(mask);
          prodv[mask] = prodv[mask & (mask - 1)] * kv[static_cast<std::size_t>(low) * len + i];
          point += gam[mask] * prodv[mask];
        }
        sum.add(point);
      }
    }
    partial[c] = sum;
  });

  CompensatedSum total;
  for (const auto& s : partial) total.add(s);
  return normalize ? total.value() / static_cast<double>(n_points) : total.value();
}

double quality_K(const GeneratingVector& g, const Modulus& p, const WeightSystem& w) {
  return point_sum(g, p, w, kernels::KernelTable(kernels::Kind::omega, p.base(), p.degree()), false, false);
}

double t_gamma(const GeneratingVector& g, const Modulus& p, const WeightSystem& w) {
  return t_alpha_gamma(g, p, 1.0, w);
}

double t_alpha_gamma(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w) {
  require(alpha >= 1.0, "alpha must be >= 1");
  return point_sum(g, p, w, kernels::KernelTable(kernels::Kind::phi_trunc, p.base(), p.degree(), alpha), true, true);
}

double wce(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w) {
  if (!(alpha > 1.0)) fail(ErrorCode::domain, "the worst-case error needs alpha > 1");
  return point_sum(g, p, w, kernels::KernelTable(kernels::Kind::phi, p.base(), p.degree(), alpha), true, true);
}

double evaluate(Criterion c, const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w) {
  switch (c) {
    case Criterion::K: return quality_K(g, p, w);
    case Criterion::T_gamma: return t_gamma(g, p, w);
    case Criterion::T_alpha: return t_alpha_gamma(g, p, alpha, w);
    case Criterion::wce: return wce(g, p, alpha, w);
  }
  fail(ErrorCode::internal, "unknown criterion");
}

std::vector<std::vector<std::uint64_t>> enumerate_dual_box(const GeneratingVector& g, const Modulus& p) {
  g.validate(p);
  std::vector<std::vector<std::uint64_t>> out;
  for_each_dual(g, p, [&](const std::vector<std::uint64_t>& k) { out.push_back(k); });
  return out;
}

double dual_box_sum(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w) {
  require(alpha >= 1.0, "alpha must be >= 1");
  require(w.dimension() == g.dimension(), "weights and generating vector differ in dimension");
  g.validate(p);
  const std::uint32_t b = p.base();
  CompensatedSum sum;
  for_each_dual(g, p, [&](const std::vector<std::uint64_t>& k) {
    std::uint64_t mask = 0;
    double inv = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k[j] == 0) continue;
      mask |= std::uint64_t{1} << j;
      inv /= kernels::decay(k[j], b, alpha);
    }
    if (mask) sum.add(w.gamma(mask) * inv);
  });
  return sum.value();
}

DualNetSum wce_by_enumeration(const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w,
                              int extra_digits) {
  if (!(alpha > 1.0)) fail(ErrorCode::domain, "the worst-case error needs alpha > 1");
  require(extra_digits >= 0 && extra_digits <= 20, "extra_digits out of range");
  require(w.dimension() == g.dimension(), "weights and generating vector differ in dimension");
  g.validate(p);
  const std::uint32_t b = p.base();
  const int m = p.degree();
  const std::uint64_t n_points = p.size();
  std::uint64_t lifts = 1;
  for (int i = 0; i < extra_digits; ++i) lifts *= b;
  if (static_cast<double>(lifts) * static_cast<double>(n_points) > static_cast<double>(oracle_limit))
    fail(ErrorCode::scale_exceeded, "oracle scale exceeded");

  // capped[r] = sum over nonzero k = r + q b^m, q < b^extra, of 1 / r_alpha(k)
  std::vector<double> capped(n_points, 0.0);
  for (std::uint64_t r = 0; r < n_points; ++r) {
    CompensatedSum s;
    for (std::uint64_t q = 0; q < lifts; ++q) {
      const std::uint64_t k = r + q * n_points;
      if (k) s.add(1.0 / kernels::decay(k, b, alpha));
    }
    capped[r] = s.value();
  }
  // each of the (b-1) b^(u-m) lifts with psi(k) = u >= m + extra contributes b^(-alpha u)
  const double beta = std::pow(static_cast<double>(b), 1.0 - alpha);
  const double rest = (b - 1.0) * std::pow(static_cast<double>(b), -m) * std::pow(beta, m + extra_digits) / (1.0 - beta);

  CompensatedSum partial, full;
  const std::size_t d = g.dimension();
  for_each_dual(g, p, [&](const std::vector<std::uint64_t>& k) {
    std::uint64_t support = 0;
    for (std::size_t j = 0; j < d; ++j)
      if (k[j]) support |= std::uint64_t{1} << j;
    if (w.is_product()) {
      double pc = 1.0, pf = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double gam = w.gamma_j(j);
        const double indicator = k[j] == 0 ? 1.0 : 0.0;
        pc *= indicator + gam * capped[k[j]];
        pf *= indicator + gam * (capped[k[j]] + rest);
      }
      const double zero = support == 0 ? 1.0 : 0.0;
      partial.add(pc - zero);
      full.add(pf - zero);
    } else {
      const std::uint64_t all = (std::uint64_t{1} << d) - 1;
      // supersets u of the support, u nonempty
      for (std::uint64_t u = all;; u = (u - 1) & all) {
        if ((u & support) == support && u != 0) {
          double pc = w.gamma(u), pf = pc;
          for (std::size_t j = 0; j < d; ++j) {
            if (!(u >> j & 1)) continue;
            pc *= capped[k[j]];
            pf *= capped[k[j]] + rest;
          }
          partial.add(pc);
          full.add(pf);
        }
        if (u == 0) break;
      }
    }
  });
  return {partial.value(), full.value() - partial.value()};
}

const char* name(BoundKind k) noexcept {
  switch (k) {
    case BoundKind::existence_T: return "existence_T";
    case BoundKind::trunc: return "trunc";
    case BoundKind::existence_wce: return "existence_wce";
    case BoundKind::cbc_K: return "cbc_K";
    case BoundKind::cbc_T: return "cbc_T";
  }
  return "?";
}

BoundKind parse_bound_kind(const std::string& text) {
  for (auto k : {BoundKind::existence_T, BoundKind::trunc, BoundKind::existence_wce, BoundKind::cbc_K, BoundKind::cbc_T})
    if (text == name(k)) return k;
  fail(ErrorCode::invalid_argument, "unknown bound kind '" + text + "'");
}

double theorem_bound(BoundKind kind, std::uint32_t b, int m, const WeightSystem& w, double alpha) {
  require(b >= 2 && m >= 1, "invalid (b, m)");
  const double n = std::pow(static_cast<double>(b), m);
  const double bm1 = b - 1.0;
  switch (kind) {
    case BoundKind::existence_T: return w.subset_sum(m * bm1) / n;
    case BoundKind::trunc: return w.subset_sum(2.0 * kernels::mu(b, alpha)) / std::pow(n, alpha);
    case BoundKind::existence_wce: {
      const double first = w.subset_sum(2.0 * kernels::mu(b, alpha));
      const double second = std::pow(w.subset_sum(m * bm1, 1.0 / alpha), alpha);
      return (first + second) / std::pow(n, alpha);
    }
    case BoundKind::cbc_K: return w.subset_sum(bm1 * m);
    case BoundKind::cbc_T: {
      const double c1 = bm1 * m;
      const double c2 = 2.0 * bm1 * m + 2.0 * b / bm1;
      return (2.0 * w.subset_sum(c1) + b * m * w.subset_sum(c2)) / n;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown bound kind");
}

std::string CriterionReport::to_json() const {
  nlohmann::ordered_json j;
  j["criterion"] = criterion;
  j["value"] = value;
  j["bound"] = bound ? nlohmann::ordered_json(*bound) : nlohmann::ordered_json(nullptr);
  j["satisfied"] = bound ? nlohmann::ordered_json(satisfied()) : nlohmann::ordered_json(nullptr);
  j["b"] = b;
  j["m"] = m;
  j["d"] = d;
  j["alpha"] = alpha ? nlohmann::ordered_json(*alpha) : nlohmann::ordered_json(nullptr);
  j["weights"] = weights;
  return j.dump();
}

CriterionReport report(Criterion c, const GeneratingVector& g, const Modulus& p, double alpha, const WeightSystem& w) {
  CriterionReport r;
  r.criterion = name(c);
  r.b = p.base();
  r.m = p.degree();
  r.d = g.dimension();
  r.weights = w.description();
  r.value = evaluate(c, g, p, alpha, w);
  switch (c) {
    case Criterion::K: r.bound = theorem_bound(BoundKind::cbc_K, r.b, r.m, w); break;
    case Criterion::T_gamma:
      if (r.m >= 4) r.bound = theorem_bound(BoundKind::cbc_T, r.b, r.m, w);
      break;
    case Criterion::T_alpha: r.alpha = alpha; break;
    case Criterion::wce:
      r.alpha = alpha;
      r.bound = t_alpha_gamma(g, p, alpha, w) + theorem_bound(BoundKind::trunc, r.b, r.m, w, alpha);
      break;
  }
  return r;
}

}  // namespace polylat::criteria
