#include "polylat/weights.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "polylat/error.hpp"

namespace polylat {
namespace {

double parse_number(std::string_view text, std::string_view context) {
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    fail(ErrorCode::invalid_argument, "cannot parse number '" + s + "' in weight expression '" + std::string(context) + "'");
  return value;
}

void check_positive(double w, const std::string& where) {
  if (!(w > 0.0) || !std::isfinite(w))
    fail(ErrorCode::invalid_argument, "weights must be strictly positive and finite (" + where + ")");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open weight file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

WeightSystem::WeightSystem(Kind kind, std::size_t d, std::vector<double> values, std::string description)
    : kind_(kind), d_(d), values_(std::move(values)), description_(std::move(description)) {}

WeightSystem WeightSystem::product(std::vector<double> gammas) {
  require(!gammas.empty(), "weights need dimension >= 1");
  for (std::size_t j = 0; j < gammas.size(); ++j) check_positive(gammas[j], "gamma_" + std::to_string(j + 1));
  const std::size_t d = gammas.size();
  return WeightSystem(Kind::product, d, std::move(gammas), "product");
}

WeightSystem WeightSystem::subset(std::size_t d, std::vector<double> by_mask) {
  require(d >= 1, "weights need dimension >= 1");
  if (d > max_subset_dimension)
    fail(ErrorCode::scale_exceeded, "subset weights are limited to d <= " + std::to_string(max_subset_dimension));
  require(by_mask.size() == (std::size_t{1} << d), "subset weights need 2^d entries");
  for (std::size_t mask = 1; mask < by_mask.size(); ++mask) check_positive(by_mask[mask], "subset mask " + std::to_string(mask));
  by_mask[0] = 0.0;
  return WeightSystem(Kind::subset, d, std::move(by_mask), "subset");
}

WeightSystem WeightSystem::parse(std::string_view expr, std::size_t d) {
  require(d >= 1, "weights need dimension >= 1");
  const std::string text(expr);
  auto starts = [&](std::string_view prefix) { return expr.substr(0, prefix.size()) == prefix; };

  if (starts("file:")) {
    const std::string path(expr.substr(5));
    std::istringstream in(read_file(path));
    std::vector<double> g;
    std::string token;
    while (g.size() < d && in >> token) g.push_back(parse_number(token, text));
    if (g.size() < d)
      fail(ErrorCode::invalid_argument, "weight file '" + path + "' holds " + std::to_string(g.size()) +
                                            " values, need " + std::to_string(d));
    auto w = product(std::move(g));
    w.description_ = text;
    return w;
  }

  if (starts("subset:")) {
    if (d > max_subset_dimension)
      fail(ErrorCode::scale_exceeded, "subset weights are limited to d <= " + std::to_string(max_subset_dimension));
    const std::string path(expr.substr(7));
    std::istringstream in(read_file(path));
    std::vector<double> by_mask(std::size_t{1} << d, 0.0);
    std::vector<bool> seen(by_mask.size(), false);
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string set, value;
      if (!(ls >> set)) continue;
      if (!(ls >> value)) fail(ErrorCode::invalid_argument, "subset weight line without value: '" + line + "'");
      std::uint64_t mask = 0;
      std::istringstream ss(set);
      std::string idx;
      while (std::getline(ss, idx, ',')) {
        const double j = parse_number(idx, text);
        if (j < 1 || j > static_cast<double>(d) || j != std::floor(j))
          fail(ErrorCode::invalid_argument, "subset index '" + idx + "' outside 1.." + std::to_string(d));
        mask |= std::uint64_t{1} << (static_cast<int>(j) - 1);
      }
      if (mask == 0) fail(ErrorCode::invalid_argument, "empty subset in weight file");
      by_mask[mask] = parse_number(value, text);
      seen[mask] = true;
    }
    for (std::size_t mask = 1; mask < by_mask.size(); ++mask)
      if (!seen[mask]) fail(ErrorCode::invalid_argument, "subset weight file misses subset mask " + std::to_string(mask));
    auto w = subset(d, std::move(by_mask));
    w.description_ = text;
    return w;
  }

  if (!starts("product:")) fail(ErrorCode::invalid_argument, "unknown weight expression '" + text + "'");
  std::string_view body = expr.substr(8);
  std::vector<double> g(d);
  if (body.substr(0, 6) == "const:") {
    const double c = parse_number(body.substr(6), text);
    for (auto& x : g) x = c;
  } else if (body.substr(0, 2) == "j^") {
    const double a = parse_number(body.substr(2), text);
    for (std::size_t j = 0; j < d; ++j) g[j] = std::pow(static_cast<double>(j + 1), a);
  } else if (body.size() > 2 && body.substr(body.size() - 2) == "^j") {
    const double c = parse_number(body.substr(0, body.size() - 2), text);
    for (std::size_t j = 0; j < d; ++j) g[j] = std::pow(c, static_cast<double>(j + 1));
  } else {
    const double c = parse_number(body, text);
    for (auto& x : g) x = c;
  }
  for (std::size_t j = 0; j < d; ++j)
    if (!(g[j] > 0.0) || !std::isfinite(g[j]))
      fail(ErrorCode::invalid_argument, "weight expression '" + text + "' gives non-positive gamma_" + std::to_string(j + 1));
  auto w = product(std::move(g));
  w.description_ = text;
  return w;
}

double WeightSystem::gamma_j(std::size_t j) const {
  require(kind_ == Kind::product, "per-coordinate weights exist only for product weights");
  require(j < d_, "weight index out of range");
  return values_[j];
}

std::span<const double> WeightSystem::gammas() const {
  require(kind_ == Kind::product, "per-coordinate weights exist only for product weights");
  return values_;
}

double WeightSystem::gamma(std::uint64_t mask) const {
  require(mask != 0, "the empty set carries no weight");
  if (kind_ == Kind::subset) {
    require(mask < values_.size(), "subset mask out of range");
    return values_[mask];
  }
  require(d_ >= 64 || mask < (std::uint64_t{1} << d_), "subset mask out of range");
  double w = 1.0;
  for (std::size_t j = 0; mask; ++j, mask >>= 1)
    if (mask & 1) w *= values_[j];
  return w;
}

WeightSystem WeightSystem::pow(double c) const {
  std::vector<double> v = values_;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (kind_ == Kind::product || i != 0) v[i] = std::pow(v[i], c);
  std::string desc = c == 1.0 ? description_ : "(" + description_ + ")^" + format_double(c);
  return WeightSystem(kind_, d_, std::move(v), std::move(desc));
}

WeightSystem WeightSystem::prefix(std::size_t s) const {
  require(s >= 1 && s <= d_, "prefix length out of range");
  if (s == d_) return *this;
  if (kind_ == Kind::product)
    return WeightSystem(kind_, s, std::vector<double>(values_.begin(), values_.begin() + s), description_);
  return WeightSystem(kind_, s, std::vector<double>(values_.begin(), values_.begin() + (std::size_t{1} << s)), description_);
}

double WeightSystem::subset_sum(double c) const { return subset_sum(c, 1.0); }

double WeightSystem::subset_sum(double c, double e) const {
  if (kind_ == Kind::product) {
    // prod_j (1 + gamma_j^e c) - 1, accumulated as an excess to avoid cancellation
    double excess = 0.0;
    for (double g : values_) {
      const double t = (e == 1.0 ? g : std::pow(g, e)) * c;
      excess += t * (1.0 + excess);
    }
    return excess;
  }
  double sum = 0.0;
  for (std::size_t mask = 1; mask < values_.size(); ++mask) {
    const double g = e == 1.0 ? values_[mask] : std::pow(values_[mask], e);
    sum += g * std::pow(c, __builtin_popcountll(mask));
  }
  return sum;
}

}  // namespace polylat
