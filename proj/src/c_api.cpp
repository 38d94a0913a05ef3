#include "polylat/polylat.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "polylat/cbc.hpp"
#include "polylat/criteria.hpp"
#include "polylat/error.hpp"
#include "polylat/experiment.hpp"
#include "polylat/ffpoly.hpp"
#include "polylat/lattice.hpp"
#include "polylat/weights.hpp"

struct polylat_weights {
  polylat::WeightSystem w;
};

struct polylat_vector {
  polylat::GeneratingVector g;
  polylat::Modulus p;
};

struct polylat_cbc_result {
  polylat::cbc::Result r;
};

struct polylat_pointset {
  polylat::PointSet ps;
};

namespace {

thread_local std::string last_error;

polylat_status to_status(polylat::ErrorCode code) {
  switch (code) {
    case polylat::ErrorCode::invalid_argument: return POLYLAT_ERR_INVALID_ARGUMENT;
    case polylat::ErrorCode::domain: return POLYLAT_ERR_DOMAIN;
    case polylat::ErrorCode::scale_exceeded: return POLYLAT_ERR_SCALE;
    case polylat::ErrorCode::io: return POLYLAT_ERR_IO;
    case polylat::ErrorCode::audit_failed: return POLYLAT_ERR_AUDIT;
    case polylat::ErrorCode::internal: return POLYLAT_ERR_INTERNAL;
  }
  return POLYLAT_ERR_INTERNAL;
}

template <class F>
polylat_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return POLYLAT_OK;
  } catch (const polylat::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return POLYLAT_ERR_SCALE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return POLYLAT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return POLYLAT_ERR_INTERNAL;
  }
}

void need(const void* ptr, const char* what) {
  if (!ptr) polylat::fail(polylat::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

polylat::Modulus modulus_for(uint32_t b, int m, uint64_t enc) {
  if (enc == 0) return polylat::find_irreducible(b, m);
  polylat::Modulus p(polylat::PolyB::from_encoding(b, enc));
  if (p.degree() != m) polylat::fail(polylat::ErrorCode::invalid_argument, "modulus degree differs from m");
  return p;
}

polylat::criteria::Criterion criterion_of(polylat_criterion c) {
  switch (c) {
    case POLYLAT_CRITERION_K: return polylat::criteria::Criterion::K;
    case POLYLAT_CRITERION_T_GAMMA: return polylat::criteria::Criterion::T_gamma;
    case POLYLAT_CRITERION_T_ALPHA: return polylat::criteria::Criterion::T_alpha;
    case POLYLAT_CRITERION_WCE: return polylat::criteria::Criterion::wce;
  }
  polylat::fail(polylat::ErrorCode::invalid_argument, "unknown criterion");
}

polylat::cbc::Config config_of(const polylat_cbc_config* cfg, const polylat_weights* w) {
  need(cfg, "config");
  need(w, "weights");
  polylat::cbc::Config c;
  c.b = cfg->b;
  c.m = cfg->m;
  c.d = cfg->d;
  c.weights = w->w;
  c.criterion = cfg->criterion_wce ? polylat::cbc::Criterion::wce : polylat::cbc::Criterion::K;
  c.alpha = cfg->alpha;
  if (cfg->modulus) c.modulus = cfg->modulus;
  if (cfg->engine != POLYLAT_ENGINE_NAIVE && cfg->engine != POLYLAT_ENGINE_FAST)
    polylat::fail(polylat::ErrorCode::invalid_argument, "unknown engine");
  c.engine = cfg->engine == POLYLAT_ENGINE_NAIVE ? polylat::cbc::Engine::naive : polylat::cbc::Engine::fast;
  if (cfg->tie_tolerance > 0) c.tie_tolerance = cfg->tie_tolerance;
  c.record_scores = cfg->record_scores != 0;
  c.audit = cfg->audit != 0;
  return c;
}

}  // namespace

extern "C" {

const char* polylat_version(void) { return "0.1.0"; }
const char* polylat_last_error(void) { return last_error.c_str(); }
void polylat_free_string(char* s) { std::free(s); }

polylat_status polylat_poly_parse(uint32_t b, const char* text, uint64_t* enc) {
  return guard([&] {
    need(text, "text");
    need(enc, "enc");
    *enc = polylat::PolyB::parse(b, text).encoding();
  });
}

polylat_status polylat_poly_to_string(uint32_t b, uint64_t enc, char** out) {
  return guard([&] {
    need(out, "out");
    *out = copy_string(polylat::PolyB::from_encoding(b, enc).to_string());
  });
}

polylat_status polylat_is_irreducible(uint32_t b, uint64_t enc, int* result) {
  return guard([&] {
    need(result, "result");
    *result = polylat::is_irreducible(polylat::PolyB::from_encoding(b, enc)) ? 1 : 0;
  });
}

polylat_status polylat_find_irreducible(uint32_t b, int m, uint64_t* enc) {
  return guard([&] {
    need(enc, "enc");
    *enc = polylat::find_irreducible(b, m).encoding();
  });
}

polylat_status polylat_mul_mod(uint32_t b, uint64_t x, uint64_t y, uint64_t modulus, uint64_t* out) {
  return guard([&] {
    need(out, "out");
    polylat::Modulus p(polylat::PolyB::from_encoding(b, modulus));
    if (x >= p.size() || y >= p.size())
      polylat::fail(polylat::ErrorCode::invalid_argument, "operands must have degree below the modulus");
    *out = polylat::mul_mod(x, y, p);
  });
}

polylat_status polylat_primitive_element(uint32_t b, uint64_t modulus, uint64_t* xi) {
  return guard([&] {
    need(xi, "xi");
    *xi = polylat::find_primitive_element(polylat::Modulus(polylat::PolyB::from_encoding(b, modulus)));
  });
}

polylat_status polylat_weights_parse(const char* expr, size_t d, polylat_weights** out) {
  return guard([&] {
    need(expr, "expr");
    need(out, "out");
    *out = new polylat_weights{polylat::WeightSystem::parse(expr, d)};
  });
}

polylat_status polylat_weights_product(const double* gammas, size_t d, polylat_weights** out) {
  return guard([&] {
    need(gammas, "gammas");
    need(out, "out");
    *out = new polylat_weights{polylat::WeightSystem::product(std::vector<double>(gammas, gammas + d))};
  });
}

polylat_status polylat_weights_subset(const double* by_mask, size_t d, polylat_weights** out) {
  return guard([&] {
    need(by_mask, "by_mask");
    need(out, "out");
    if (d < 1 || d > polylat::WeightSystem::max_subset_dimension)
      polylat::fail(polylat::ErrorCode::scale_exceeded, "subset weights are limited to 1 <= d <= 12");
    const std::size_t count = std::size_t{1} << d;
    *out = new polylat_weights{polylat::WeightSystem::subset(d, std::vector<double>(by_mask, by_mask + count))};
  });
}

polylat_status polylat_weights_pow(const polylat_weights* w, double c, polylat_weights** out) {
  return guard([&] {
    need(w, "weights");
    need(out, "out");
    *out = new polylat_weights{w->w.pow(c)};
  });
}

polylat_status polylat_weights_dimension(const polylat_weights* w, size_t* d) {
  return guard([&] {
    need(w, "weights");
    need(d, "d");
    *d = w->w.dimension();
  });
}

void polylat_weights_free(polylat_weights* w) { delete w; }

polylat_status polylat_vector_create(uint32_t b, int m, uint64_t modulus, const uint64_t* components, size_t d,
                                     polylat_vector** out) {
  return guard([&] {
    need(components, "components");
    need(out, "out");
    auto p = modulus_for(b, m, modulus);
    polylat::GeneratingVector g{b, m, std::vector<std::uint64_t>(components, components + d)};
    g.validate(p);
    *out = new polylat_vector{std::move(g), std::move(p)};
  });
}

polylat_status polylat_vector_parse(const char* text, polylat_vector** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    auto vf = polylat::cbc::parse_vector_line(text);
    *out = new polylat_vector{std::move(vf.g), std::move(vf.p)};
  });
}

polylat_status polylat_vector_load(const char* path, polylat_vector** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path);
    if (!in) polylat::fail(polylat::ErrorCode::io, std::string("cannot open vector file '") + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    auto vf = polylat::cbc::parse_vector_line(ss.str());
    *out = new polylat_vector{std::move(vf.g), std::move(vf.p)};
  });
}

polylat_status polylat_vector_to_text(const polylat_vector* v, char** out) {
  return guard([&] {
    need(v, "vector");
    need(out, "out");
    std::ostringstream s;
    s << v->p.base() << ' ' << v->p.degree() << ' ' << v->p.encoding();
    for (auto c : v->g.components) s << ' ' << c;
    *out = copy_string(s.str());
  });
}

polylat_status polylat_vector_info(const polylat_vector* v, uint32_t* b, int* m, uint64_t* modulus, size_t* d) {
  return guard([&] {
    need(v, "vector");
    if (b) *b = v->p.base();
    if (m) *m = v->p.degree();
    if (modulus) *modulus = v->p.encoding();
    if (d) *d = v->g.dimension();
  });
}

polylat_status polylat_vector_components(const polylat_vector* v, uint64_t* out, size_t capacity) {
  return guard([&] {
    need(v, "vector");
    need(out, "out");
    if (capacity < v->g.dimension()) polylat::fail(polylat::ErrorCode::invalid_argument, "output buffer too small");
    std::copy(v->g.components.begin(), v->g.components.end(), out);
  });
}

void polylat_vector_free(polylat_vector* v) { delete v; }

polylat_status polylat_evaluate(const polylat_vector* v, const polylat_weights* w, polylat_criterion criterion,
                                double alpha, double* value) {
  return guard([&] {
    need(v, "vector");
    need(w, "weights");
    need(value, "value");
    *value = polylat::criteria::evaluate(criterion_of(criterion), v->g, v->p, alpha, w->w);
  });
}

polylat_status polylat_report_json(const polylat_vector* v, const polylat_weights* w, polylat_criterion criterion,
                                   double alpha, char** json) {
  return guard([&] {
    need(v, "vector");
    need(w, "weights");
    need(json, "json");
    *json = copy_string(polylat::criteria::report(criterion_of(criterion), v->g, v->p, alpha, w->w).to_json());
  });
}

polylat_status polylat_theorem_bound(polylat_bound kind, uint32_t b, int m, const polylat_weights* w, double alpha,
                                     double* value) {
  return guard([&] {
    need(w, "weights");
    need(value, "value");
    using polylat::criteria::BoundKind;
    BoundKind k;
    switch (kind) {
      case POLYLAT_BOUND_EXISTENCE_T: k = BoundKind::existence_T; break;
      case POLYLAT_BOUND_TRUNC: k = BoundKind::trunc; break;
      case POLYLAT_BOUND_EXISTENCE_WCE: k = BoundKind::existence_wce; break;
      case POLYLAT_BOUND_CBC_K: k = BoundKind::cbc_K; break;
      case POLYLAT_BOUND_CBC_T: k = BoundKind::cbc_T; break;
      default: polylat::fail(polylat::ErrorCode::invalid_argument, "unknown bound kind");
    }
    *value = polylat::criteria::theorem_bound(k, b, m, w->w, alpha);
  });
}

void polylat_cbc_config_init(polylat_cbc_config* cfg) {
  if (!cfg) return;
  *cfg = polylat_cbc_config{};
  cfg->b = 2;
  cfg->m = 4;
  cfg->d = 1;
  cfg->alpha = 2.0;
  cfg->engine = POLYLAT_ENGINE_FAST;
  cfg->tie_tolerance = 0.0;
}

polylat_status polylat_cbc_construct(const polylat_cbc_config* cfg, const polylat_weights* w, polylat_cbc_result** out) {
  return guard([&] {
    need(out, "out");
    *out = new polylat_cbc_result{polylat::cbc::construct(config_of(cfg, w))};
  });
}

polylat_status polylat_cbc_memory_estimate(const polylat_cbc_config* cfg, const polylat_weights* w, double* bytes) {
  return guard([&] {
    need(bytes, "bytes");
    *bytes = polylat::cbc::memory_estimate(config_of(cfg, w));
  });
}

polylat_status polylat_cbc_result_vector(const polylat_cbc_result* r, polylat_vector** out) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    *out = new polylat_vector{r->r.g, r->r.p};
  });
}

polylat_status polylat_cbc_result_json(const polylat_cbc_result* r, char** json) {
  return guard([&] {
    need(r, "result");
    need(json, "json");
    *json = copy_string(r->r.to_json());
  });
}

polylat_status polylat_cbc_result_step_values(const polylat_cbc_result* r, double* out, size_t capacity) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    if (capacity < r->r.values.size()) polylat::fail(polylat::ErrorCode::invalid_argument, "output buffer too small");
    std::copy(r->r.values.begin(), r->r.values.end(), out);
  });
}

polylat_status polylat_cbc_result_scores(const polylat_cbc_result* r, size_t s, double* out, size_t capacity) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    if (s >= r->r.scores.size() || r->r.scores[s].empty())
      polylat::fail(polylat::ErrorCode::invalid_argument, "no scores recorded for this step");
    const auto& sc = r->r.scores[s];
    if (capacity < sc.size()) polylat::fail(polylat::ErrorCode::invalid_argument, "output buffer too small");
    std::copy(sc.begin(), sc.end(), out);
  });
}

polylat_status polylat_cbc_result_audit_passed(const polylat_cbc_result* r, int* passed) {
  return guard([&] {
    need(r, "result");
    need(passed, "passed");
    *passed = r->r.audit_passed() ? 1 : 0;
  });
}

void polylat_cbc_result_free(polylat_cbc_result* r) { delete r; }

polylat_status polylat_pointset_generate(const polylat_vector* v, polylat_pointset** out) {
  return guard([&] {
    need(v, "vector");
    need(out, "out");
    *out = new polylat_pointset{polylat::generate(v->g, v->p)};
  });
}

polylat_status polylat_pointset_info(const polylat_pointset* ps, uint64_t* n, size_t* d) {
  return guard([&] {
    need(ps, "pointset");
    if (n) *n = ps->ps.size();
    if (d) *d = ps->ps.dimension();
  });
}

polylat_status polylat_pointset_numerators(const polylat_pointset* ps, size_t j, uint32_t* out, size_t capacity) {
  return guard([&] {
    need(ps, "pointset");
    need(out, "out");
    auto col = ps->ps.column(j);
    if (capacity < col.size()) polylat::fail(polylat::ErrorCode::invalid_argument, "output buffer too small");
    std::copy(col.begin(), col.end(), out);
  });
}

polylat_status polylat_pointset_write(const polylat_pointset* ps, const char* path, polylat_point_format format) {
  return guard([&] {
    need(ps, "pointset");
    need(path, "path");
    const bool binary = format == POLYLAT_POINTS_BINARY;
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) polylat::fail(polylat::ErrorCode::io, std::string("cannot open '") + path + "' for writing");
    switch (format) {
      case POLYLAT_POINTS_RATIONAL: polylat::write_text(ps->ps, out, polylat::CoordinateFormat::rational); break;
      case POLYLAT_POINTS_DECIMAL: polylat::write_text(ps->ps, out, polylat::CoordinateFormat::decimal); break;
      case POLYLAT_POINTS_BINARY: polylat::write_binary(ps->ps, out); break;
      default: polylat::fail(polylat::ErrorCode::invalid_argument, "unknown point format");
    }
  });
}

void polylat_pointset_free(polylat_pointset* ps) { delete ps; }

polylat_status polylat_convergence(const polylat_convergence_config* cfg, char** table_csv, char** slopes_csv) {
  return guard([&] {
    need(cfg, "config");
    need(table_csv, "table_csv");
    polylat::experiment::ConvergenceSpec spec;
    spec.b = cfg->b;
    spec.d = cfg->d;
    spec.m_lo = cfg->m_lo;
    spec.m_hi = cfg->m_hi;
    if (cfg->n_alphas) {
      need(cfg->alphas, "alphas");
      spec.alphas.assign(cfg->alphas, cfg->alphas + cfg->n_alphas);
    }
    if (cfg->weights) spec.weights = cfg->weights;
    spec.standard_cbc = cfg->standard_cbc != 0;
    if (cfg->fit_lo || cfg->fit_hi) {
      spec.fit_lo = cfg->fit_lo;
      spec.fit_hi = cfg->fit_hi;
    }
    const auto table = polylat::experiment::convergence(spec);
    std::string csv = table.to_csv(), slopes = table.slopes_csv();
    *table_csv = copy_string(csv);
    if (slopes_csv) *slopes_csv = copy_string(slopes);
  });
}

polylat_status polylat_bench(const polylat_bench_config* cfg, char** csv) {
  return guard([&] {
    need(cfg, "config");
    need(csv, "csv");
    polylat::experiment::BenchSpec spec;
    spec.b = cfg->b;
    if (cfg->n_ms) {
      need(cfg->ms, "ms");
      spec.ms.assign(cfg->ms, cfg->ms + cfg->n_ms);
    }
    if (cfg->n_ds) {
      need(cfg->ds, "ds");
      spec.ds.assign(cfg->ds, cfg->ds + cfg->n_ds);
    }
    if (cfg->reps > 0) spec.reps = cfg->reps;
    if (cfg->min_seconds != 0.0) spec.min_seconds = cfg->min_seconds < 0.0 ? 0.0 : cfg->min_seconds;
    if (cfg->weights) spec.weights = cfg->weights;
    *csv = copy_string(polylat::experiment::bench(spec).to_csv());
  });
}

}  // extern "C"
