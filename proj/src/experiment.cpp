#include "polylat/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "polylat/cbc.hpp"
#include "polylat/criteria.hpp"
#include "polylat/error.hpp"
#include "polylat/parallel.hpp"

namespace polylat::experiment {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string fmt_alpha(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

}  // namespace

ConvergenceTable convergence(const ConvergenceSpec& spec) {
  require(spec.m_lo >= 1 && spec.m_hi >= spec.m_lo, "m range must be nonempty");
  require(!spec.alphas.empty(), "at least one alpha is required");
  for (double a : spec.alphas) require(a > 1.0, "every alpha must be > 1");
  const auto gamma = WeightSystem::parse(spec.weights, spec.d);
  if (!gamma.is_product()) fail(ErrorCode::invalid_argument, "convergence studies need product weights");

  ConvergenceTable table;
  table.spec = spec;
  const int count = spec.m_hi - spec.m_lo + 1;
  const std::size_t na = spec.alphas.size();
  table.rows.resize(count);
  for (int i = 0; i < count; ++i) {
    auto& row = table.rows[i];
    row.m = spec.m_lo + i;
    row.n = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(spec.b), row.m)));
    row.alg1.assign(na, 0.0);
    if (spec.standard_cbc) row.standard.assign(na, 0.0);
  }

  // cells: (m, -1) is one Algorithm-1 run evaluated for every alpha; (m, a) a standard run
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < count; ++i) {
    cells.emplace_back(i, -1);
    if (spec.standard_cbc)
      for (std::size_t a = 0; a < na; ++a) cells.emplace_back(i, static_cast<int>(a));
  }
  parallel_for(cells.size(), [&](std::size_t c) {
    const auto [i, a] = cells[c];
    auto& row = table.rows[i];
    cbc::Config cfg;
    cfg.b = spec.b;
    cfg.m = row.m;
    cfg.d = spec.d;
    cfg.engine = cbc::Engine::fast;
    if (a < 0) {
      cfg.weights = gamma;
      cfg.criterion = cbc::Criterion::K;
      const auto res = cbc::construct(cfg);
      for (std::size_t k = 0; k < na; ++k)
        row.alg1[k] = criteria::wce(res.g, res.p, spec.alphas[k], gamma.pow(spec.alphas[k]));
    } else {
      const double alpha = spec.alphas[a];
      cfg.weights = gamma.pow(alpha);
      cfg.criterion = cbc::Criterion::wce;
      cfg.alpha = alpha;
      const auto res = cbc::construct(cfg);
      row.standard[a] = criteria::wce(res.g, res.p, alpha, cfg.weights);
    }
  });

  const int lo = spec.fit_lo.value_or(spec.m_lo + count / 2);
  const int hi = spec.fit_hi.value_or(spec.m_hi);
  for (std::size_t a = 0; a < na; ++a) {
    table.slopes.push_back({"alg1", spec.alphas[a], lo, hi, fit_slope(table.rows, a, false, lo, hi)});
    if (spec.standard_cbc)
      table.slopes.push_back({"stdcbc", spec.alphas[a], lo, hi, fit_slope(table.rows, a, true, lo, hi)});
  }
  return table;
}

double fit_slope(const std::vector<ConvergenceRow>& rows, std::size_t alpha_index, bool standard, int lo, int hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& row : rows) {
    if (row.m < lo || row.m > hi) continue;
    const auto& series = standard ? row.standard : row.alg1;
    require(alpha_index < series.size(), "no such series");
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(series[alpha_index]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) fail(ErrorCode::invalid_argument, "slope fit needs at least two m values");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

std::string ConvergenceTable::to_csv() const {
  std::ostringstream out;
  out << "m,N";
  for (double a : spec.alphas) out << ",alg1_alpha" << fmt_alpha(a);
  if (spec.standard_cbc)
    for (double a : spec.alphas) out << ",stdcbc_alpha" << fmt_alpha(a);
  out << '\n';
  for (const auto& row : rows) {
    out << row.m << ',' << row.n;
    for (double v : row.alg1) out << ',' << fmt(v);
    for (double v : row.standard) out << ',' << fmt(v);
    out << '\n';
  }
  return out.str();
}

std::string ConvergenceTable::slopes_csv() const {
  std::ostringstream out;
  out << "series,alpha,m_lo,m_hi,slope\n";
  for (const auto& s : slopes) out << s.series << ',' << fmt_alpha(s.alpha) << ',' << s.fit_lo << ',' << s.fit_hi << ',' << fmt(s.slope) << '\n';
  return out.str();
}

BenchTable bench(const BenchSpec& spec) {
  require(!spec.ms.empty() && !spec.ds.empty(), "bench grid must be nonempty");
  require(spec.reps >= 1, "reps must be >= 1");
  struct Cell {
    cbc::Config cfg;
    double best = std::numeric_limits<double>::infinity();
    int runs = 0;
  };
  std::vector<Cell> cells;
  for (int m : spec.ms) {
    {
      // untimed warm-up: first use of this transform size
      cbc::Config warm;
      warm.b = spec.b;
      warm.m = m;
      warm.d = 2;
      warm.weights = WeightSystem::parse(spec.weights, 2);
      cbc::construct(warm);
    }
    for (std::size_t d : spec.ds) {
      Cell cell;
      cell.cfg.b = spec.b;
      cell.cfg.m = m;
      cell.cfg.d = d;
      cell.cfg.weights = WeightSystem::parse(spec.weights, d);
      cell.cfg.engine = cbc::Engine::fast;
      cells.push_back(std::move(cell));
    }
  }
  // Rounds sweep the whole grid so slow phases of the machine hit every cell alike.
  const double slice = spec.min_seconds / spec.reps;
  const int cap = std::max(1, spec.max_reps / spec.reps);
  for (int round = 0; round < spec.reps; ++round) {
    for (auto& cell : cells) {
      double spent = 0.0;
      for (int r = 0; r == 0 || (spent < slice && r < cap); ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = cbc::construct(cell.cfg);
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        cell.best = std::min(cell.best, t);
        spent += t;
        ++cell.runs;
      }
    }
  }
  BenchTable table;
  std::map<std::pair<int, std::size_t>, double> seconds;
  for (const auto& cell : cells) {
    seconds[{cell.cfg.m, cell.cfg.d}] = cell.best;
    table.rows.push_back({cell.cfg.m, cell.cfg.d, cell.best, std::nullopt, std::nullopt});
  }
  for (auto& row : table.rows) {
    if (auto it = seconds.find({row.m + 2, row.d}); it != seconds.end()) row.ratio_m_plus_2 = it->second / row.seconds;
    if (auto it = seconds.find({row.m, 2 * row.d}); it != seconds.end()) row.ratio_2d = it->second / row.seconds;
  }
  return table;
}

std::string BenchTable::to_csv() const {
  std::ostringstream out;
  out << "m,d,seconds,ratio_m_plus_2,ratio_2d\n";
  char buf[40];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.6f", row.seconds);
    out << row.m << ',' << row.d << ',' << buf << ',';
    if (row.ratio_m_plus_2) {
      std::snprintf(buf, sizeof buf, "%.4f", *row.ratio_m_plus_2);
      out << buf;
    }
    out << ',';
    if (row.ratio_2d) {
      std::snprintf(buf, sizeof buf, "%.4f", *row.ratio_2d);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace polylat::experiment
