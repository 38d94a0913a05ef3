// Command-line front end over the C interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "polylat/polylat.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_config = 2;
constexpr int exit_audit = 3;

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(polylat_status s) {
  switch (s) {
    case POLYLAT_OK: return exit_ok;
    case POLYLAT_ERR_INVALID_ARGUMENT:
    case POLYLAT_ERR_DOMAIN:
    case POLYLAT_ERR_SCALE: return exit_config;
    case POLYLAT_ERR_AUDIT: return exit_audit;
    default: return exit_failure;
  }
}

void check(polylat_status s) {
  if (s != POLYLAT_OK) throw CliError{exit_code_for(s), polylat_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  polylat_free_string(s);
  return out;
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Weights = std::unique_ptr<polylat_weights, Deleter<polylat_weights, polylat_weights_free>>;
using Vector = std::unique_ptr<polylat_vector, Deleter<polylat_vector, polylat_vector_free>>;
using CbcResult = std::unique_ptr<polylat_cbc_result, Deleter<polylat_cbc_result, polylat_cbc_result_free>>;
using PointSet = std::unique_ptr<polylat_pointset, Deleter<polylat_pointset, polylat_pointset_free>>;

Weights make_weights(const std::string& expr, std::size_t d) {
  polylat_weights* w = nullptr;
  check(polylat_weights_parse(expr.c_str(), d, &w));
  return Weights(w);
}

Vector load_vector(const std::string& path) {
  polylat_vector* v = nullptr;
  check(polylat_vector_load(path.c_str(), &v));
  return Vector(v);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw CliError{exit_failure, "cannot open '" + path + "' for writing"};
  out << text;
  if (!out) throw CliError{exit_failure, "failed writing '" + path + "'"};
}

// CSV with a header row to a JSON array of objects; numeric cells become numbers.
std::string csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (header.empty()) {
      header = cells;
      continue;
    }
    nlohmann::ordered_json row;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string cell = i < cells.size() ? cells[i] : "";
      if (cell.empty()) {
        row[header[i]] = nullptr;
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end && *end == '\0' && cell.find_first_of(".eE") == std::string::npos)
        row[header[i]] = std::stoll(cell);
      else if (end && *end == '\0')
        row[header[i]] = v;
      else
        row[header[i]] = cell;
    }
    rows.push_back(row);
  }
  return rows.dump(2) + "\n";
}

bool parse_int(const std::string& text, int& out) {
  std::size_t used = 0;
  try {
    out = std::stoi(text, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == text.size();
}

// "v", "lo:hi" or, when step is given, also "lo:hi:step"
bool parse_range(const std::string& text, int& lo, int& hi, int* step = nullptr) {
  std::vector<std::string> parts;
  std::istringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (step) *step = 1;
  if (parts.size() == 1) {
    if (!parse_int(parts[0], lo)) return false;
    hi = lo;
    return true;
  }
  if (parts.size() == 3 && step) {
    if (!parse_int(parts[2], *step) || *step < 1) return false;
  } else if (parts.size() != 2) {
    return false;
  }
  return parse_int(parts[0], lo) && parse_int(parts[1], hi) && lo <= hi;
}

struct ConstructOptions {
  std::uint32_t b = 2;
  int m = 4;
  std::size_t d = 1;
  std::string weights = "product:j^-2";
  std::string criterion = "K";
  double alpha = 2.0;
  std::string modulus = "auto";
  std::string engine = "fast";
  std::string out = "-";
  std::string json;
  bool no_audit = false;
  double tie_tolerance = 0.0;
  double memory_budget_mb = 4096;
};

int run_construct(const ConstructOptions& o) {
  auto w = make_weights(o.weights, o.d);
  polylat_cbc_config cfg;
  polylat_cbc_config_init(&cfg);
  cfg.b = o.b;
  cfg.m = o.m;
  cfg.d = o.d;
  if (o.criterion == "K")
    cfg.criterion_wce = 0;
  else if (o.criterion == "wce")
    cfg.criterion_wce = 1;
  else
    throw CliError{exit_config, "unknown criterion '" + o.criterion + "' (expected K or wce)"};
  cfg.alpha = o.alpha;
  if (o.modulus != "auto") check(polylat_poly_parse(o.b, o.modulus.c_str(), &cfg.modulus));
  if (o.engine == "fast")
    cfg.engine = POLYLAT_ENGINE_FAST;
  else if (o.engine == "naive")
    cfg.engine = POLYLAT_ENGINE_NAIVE;
  else
    throw CliError{exit_config, "unknown engine '" + o.engine + "' (expected fast or naive)"};
  cfg.tie_tolerance = o.tie_tolerance;
  cfg.audit = (o.no_audit || cfg.criterion_wce) ? 0 : 1;

  double bytes = 0;
  check(polylat_cbc_memory_estimate(&cfg, w.get(), &bytes));
  if (bytes > o.memory_budget_mb * 1024.0 * 1024.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "construction needs about %.0f MiB, above the memory budget of %.0f MiB",
                  bytes / (1024.0 * 1024.0), o.memory_budget_mb);
    throw CliError{exit_config, buf};
  }

  polylat_cbc_result* raw = nullptr;
  check(polylat_cbc_construct(&cfg, w.get(), &raw));
  CbcResult res(raw);
  polylat_vector* vraw = nullptr;
  check(polylat_cbc_result_vector(res.get(), &vraw));
  Vector vec(vraw);
  char* text = nullptr;
  check(polylat_vector_to_text(vec.get(), &text));
  write_output(o.out, take(text) + "\n");
  if (!o.json.empty()) {
    char* js = nullptr;
    check(polylat_cbc_result_json(res.get(), &js));
    write_output(o.json, take(js) + "\n");
  }
  int passed = 1;
  check(polylat_cbc_result_audit_passed(res.get(), &passed));
  if (!passed) {
    std::cerr << "polylat: audit failed (a theorem bound is violated)\n";
    return exit_audit;
  }
  return exit_ok;
}

polylat_criterion criterion_of(const std::string& c) {
  if (c == "K") return POLYLAT_CRITERION_K;
  if (c == "T" || c == "T_gamma") return POLYLAT_CRITERION_T_GAMMA;
  if (c == "Talpha" || c == "T_alpha") return POLYLAT_CRITERION_T_ALPHA;
  if (c == "wce") return POLYLAT_CRITERION_WCE;
  throw CliError{exit_config, "unknown criterion '" + c + "' (expected K, T, Talpha or wce)"};
}

polylat_bound bound_of(const std::string& k) {
  if (k == "existence_T") return POLYLAT_BOUND_EXISTENCE_T;
  if (k == "trunc") return POLYLAT_BOUND_TRUNC;
  if (k == "existence_wce") return POLYLAT_BOUND_EXISTENCE_WCE;
  if (k == "cbc_K") return POLYLAT_BOUND_CBC_K;
  if (k == "cbc_T") return POLYLAT_BOUND_CBC_T;
  throw CliError{exit_config, "unknown bound kind '" + k + "'"};
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> out;
  std::istringstream ss(list);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw CliError{exit_config, "cannot parse number '" + cell + "'"};
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& list) {
  std::vector<int> out;
  std::istringstream ss(list);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    int lo, hi, step;
    if (!parse_range(cell, lo, hi, &step)) throw CliError{exit_config, "cannot parse integer range '" + cell + "'"};
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) throw CliError{exit_config, "empty integer list"};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial lattice rules: construction, criteria and experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(polylat_version()));

  ConstructOptions co;
  auto* construct = app.add_subcommand("construct", "Build a generating vector component by component");
  construct->add_option("--b", co.b, "Prime base")->capture_default_str();
  construct->add_option("--m", co.m, "Modulus degree (N = b^m)")->capture_default_str();
  construct->add_option("--d", co.d, "Dimension")->capture_default_str();
  construct->add_option("--weights", co.weights, "Weight expression")->capture_default_str();
  construct->add_option("--criterion", co.criterion, "K (smoothness independent) or wce")->capture_default_str();
  construct->add_option("--alpha", co.alpha, "Smoothness for the wce criterion")->capture_default_str();
  construct->add_option("--modulus", co.modulus, "auto, an encoding, or x^m+... notation")->capture_default_str();
  construct->add_option("--engine", co.engine, "fast or naive")->capture_default_str();
  construct->add_option("--out", co.out, "Vector file ('-' for stdout)")->capture_default_str();
  construct->add_option("--json", co.json, "Result JSON file ('-' for stdout)");
  construct->add_flag("--no-audit", co.no_audit, "Skip the bound audit");
  construct->add_option("--tie-tolerance", co.tie_tolerance, "Relative tie tolerance (0: default)");
  construct->add_option("--memory-budget-mb", co.memory_budget_mb, "Refuse runs estimated above this")->capture_default_str();

  std::string ev_vector, ev_weights = "product:j^-2", ev_criterion = "K";
  double ev_alpha = 2.0;
  auto* eval = app.add_subcommand("eval", "Evaluate a criterion for a stored vector (JSON report)");
  eval->add_option("--vector", ev_vector, "Vector file")->required();
  eval->add_option("--weights", ev_weights, "Weight expression")->capture_default_str();
  eval->add_option("--criterion", ev_criterion, "K, T, Talpha or wce")->capture_default_str();
  eval->add_option("--alpha", ev_alpha, "Smoothness")->capture_default_str();

  std::string bd_kind = "cbc_K", bd_weights = "product:j^-2";
  std::uint32_t bd_b = 2;
  int bd_m = 4;
  std::size_t bd_d = 1;
  double bd_alpha = 2.0;
  auto* bound = app.add_subcommand("bound", "Print a theorem bound");
  bound->add_option("--kind", bd_kind, "existence_T, trunc, existence_wce, cbc_K or cbc_T")->capture_default_str();
  bound->add_option("--b", bd_b)->capture_default_str();
  bound->add_option("--m", bd_m)->capture_default_str();
  bound->add_option("--d", bd_d)->capture_default_str();
  bound->add_option("--weights", bd_weights)->capture_default_str();
  bound->add_option("--alpha", bd_alpha)->capture_default_str();

  std::uint32_t cv_b = 2;
  std::size_t cv_d = 100;
  std::string cv_m = "4:12", cv_alpha = "1.5,2,3", cv_weights = "product:j^-2", cv_fit, cv_out = "-", cv_slopes,
              cv_format = "csv";
  bool cv_standard = false;
  auto* conv = app.add_subcommand("convergence", "Worst-case error against N for several smoothness values");
  conv->add_option("--b", cv_b)->capture_default_str();
  conv->add_option("--d", cv_d)->capture_default_str();
  conv->add_option("--m", cv_m, "m range lo:hi")->capture_default_str();
  conv->add_option("--alpha", cv_alpha, "Comma-separated smoothness values")->capture_default_str();
  conv->add_option("--weights", cv_weights, "Weight expression for gamma")->capture_default_str();
  conv->add_flag("--standard-cbc", cv_standard, "Also run the wce-criterion construction per alpha");
  conv->add_option("--fit", cv_fit, "Slope fit range lo:hi (default: upper half of --m)");
  conv->add_option("--out", cv_out, "Table output ('-' for stdout)")->capture_default_str();
  conv->add_option("--slopes", cv_slopes, "Slope CSV output");
  conv->add_option("--format", cv_format, "csv or json")->capture_default_str();

  std::uint32_t bn_b = 2;
  std::string bn_m = "10,12,14", bn_d = "50,100", bn_weights = "product:j^-2", bn_out = "-", bn_format = "csv";
  int bn_reps = 3;
  double bn_min_seconds = 0.2;
  auto* bench = app.add_subcommand("bench", "Time the fast construction on an (m, d) grid");
  bench->add_option("--b", bn_b)->capture_default_str();
  bench->add_option("--m", bn_m, "Comma-separated m values or ranges")->capture_default_str();
  bench->add_option("--d", bn_d, "Comma-separated dimensions")->capture_default_str();
  bench->add_option("--reps", bn_reps, "Minimum repetitions (fastest kept)")->capture_default_str();
  bench->add_option("--min-seconds", bn_min_seconds, "Repeat each cell until it ran this long in total")
      ->capture_default_str();
  bench->add_option("--weights", bn_weights)->capture_default_str();
  bench->add_option("--out", bn_out)->capture_default_str();
  bench->add_option("--format", bn_format, "csv or json")->capture_default_str();

  std::string pt_vector, pt_format = "rational", pt_out;
  double pt_budget = 4096;
  auto* points = app.add_subcommand("points", "Export the point set of a stored vector");
  points->add_option("--vector", pt_vector, "Vector file")->required();
  points->add_option("--format", pt_format, "rational, decimal or binary")->capture_default_str();
  points->add_option("--out", pt_out, "Output file")->required();
  points->add_option("--memory-budget-mb", pt_budget)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*construct) return run_construct(co);

    if (*eval) {
      auto v = load_vector(ev_vector);
      std::size_t d = 0;
      check(polylat_vector_info(v.get(), nullptr, nullptr, nullptr, &d));
      auto w = make_weights(ev_weights, d);
      char* js = nullptr;
      check(polylat_report_json(v.get(), w.get(), criterion_of(ev_criterion), ev_alpha, &js));
      std::cout << take(js) << "\n";
      return exit_ok;
    }

    if (*bound) {
      auto w = make_weights(bd_weights, bd_d);
      double value = 0;
      check(polylat_theorem_bound(bound_of(bd_kind), bd_b, bd_m, w.get(), bd_alpha, &value));
      std::printf("%.17g\n", value);
      return exit_ok;
    }

    if (*conv) {
      if (cv_format != "csv" && cv_format != "json") throw CliError{exit_config, "format must be csv or json"};
      polylat_convergence_config cfg{};
      cfg.b = cv_b;
      cfg.d = cv_d;
      if (!parse_range(cv_m, cfg.m_lo, cfg.m_hi)) throw CliError{exit_config, "invalid m range '" + cv_m + "'"};
      const auto alphas = parse_doubles(cv_alpha);
      cfg.alphas = alphas.data();
      cfg.n_alphas = alphas.size();
      cfg.weights = cv_weights.c_str();
      cfg.standard_cbc = cv_standard ? 1 : 0;
      if (!cv_fit.empty() && !parse_range(cv_fit, cfg.fit_lo, cfg.fit_hi))
        throw CliError{exit_config, "invalid fit range '" + cv_fit + "'"};
      char* table = nullptr;
      char* slopes = nullptr;
      check(polylat_convergence(&cfg, &table, &slopes));
      const std::string table_csv = take(table), slopes_csv = take(slopes);
      write_output(cv_out, cv_format == "json" ? csv_to_json(table_csv) : table_csv);
      if (!cv_slopes.empty()) write_output(cv_slopes, cv_format == "json" ? csv_to_json(slopes_csv) : slopes_csv);
      std::cerr << slopes_csv;
      return exit_ok;
    }

    if (*bench) {
      if (bn_format != "csv" && bn_format != "json") throw CliError{exit_config, "format must be csv or json"};
      const auto ms = parse_int_list(bn_m);
      std::vector<std::size_t> ds;
      for (int v : parse_int_list(bn_d)) {
        if (v < 1) throw CliError{exit_config, "dimensions must be >= 1"};
        ds.push_back(static_cast<std::size_t>(v));
      }
      polylat_bench_config cfg{};
      cfg.b = bn_b;
      cfg.ms = ms.data();
      cfg.n_ms = ms.size();
      cfg.ds = ds.data();
      cfg.n_ds = ds.size();
      cfg.reps = bn_reps;
      cfg.min_seconds = bn_min_seconds > 0.0 ? bn_min_seconds : -1.0;
      cfg.weights = bn_weights.c_str();
      char* csv = nullptr;
      check(polylat_bench(&cfg, &csv));
      const std::string text = take(csv);
      write_output(bn_out, bn_format == "json" ? csv_to_json(text) : text);
      return exit_ok;
    }

    if (*points) {
      polylat_point_format format;
      if (pt_format == "rational")
        format = POLYLAT_POINTS_RATIONAL;
      else if (pt_format == "decimal")
        format = POLYLAT_POINTS_DECIMAL;
      else if (pt_format == "binary")
        format = POLYLAT_POINTS_BINARY;
      else
        throw CliError{exit_config, "format must be rational, decimal or binary"};
      auto v = load_vector(pt_vector);
      std::uint32_t b = 0;
      int m = 0;
      std::size_t d = 0;
      check(polylat_vector_info(v.get(), &b, &m, nullptr, &d));
      double bytes = 4.0 * static_cast<double>(d);
      for (int i = 0; i < m; ++i) bytes *= b;
      if (bytes > pt_budget * 1024.0 * 1024.0)
        throw CliError{exit_config, "point set needs " + std::to_string(static_cast<long long>(bytes / 1048576.0)) +
                                        " MiB, above the memory budget"};
      polylat_pointset* raw = nullptr;
      check(polylat_pointset_generate(v.get(), &raw));
      PointSet ps(raw);
      check(polylat_pointset_write(ps.get(), pt_out.c_str(), format));
      return exit_ok;
    }
  } catch (const CliError& e) {
    std::cerr << "polylat: " << e.message << "\n";
    return e.code;
  }
  return exit_failure;
}
