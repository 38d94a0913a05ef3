#ifndef POLYLAT_POLYLAT_H
#define POLYLAT_POLYLAT_H

/* C interface to the polynomial lattice rule library.
 *
 * Every fallible call returns a polylat_status; on failure a message is
 * available from polylat_last_error() on the calling thread. Strings handed
 * out through char** parameters are owned by the caller and released with
 * polylat_free_string(). Handles are released with their *_free function;
 * passing NULL to a *_free function is a no-op. */

#include <stddef.h>
#include <stdint.h>

#if defined(POLYLAT_BUILDING_LIBRARY)
#define POLYLAT_API __attribute__((visibility("default")))
#else
#define POLYLAT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polylat_status {
  POLYLAT_OK = 0,
  POLYLAT_ERR_INVALID_ARGUMENT = 1,
  POLYLAT_ERR_DOMAIN = 2,
  POLYLAT_ERR_SCALE = 3,
  POLYLAT_ERR_IO = 4,
  POLYLAT_ERR_AUDIT = 5,
  POLYLAT_ERR_INTERNAL = 6
} polylat_status;

typedef enum polylat_criterion {
  POLYLAT_CRITERION_K = 0,
  POLYLAT_CRITERION_T_GAMMA = 1,
  POLYLAT_CRITERION_T_ALPHA = 2,
  POLYLAT_CRITERION_WCE = 3
} polylat_criterion;

typedef enum polylat_bound {
  POLYLAT_BOUND_EXISTENCE_T = 0,
  POLYLAT_BOUND_TRUNC = 1,
  POLYLAT_BOUND_EXISTENCE_WCE = 2,
  POLYLAT_BOUND_CBC_K = 3,
  POLYLAT_BOUND_CBC_T = 4
} polylat_bound;

typedef enum polylat_engine { POLYLAT_ENGINE_NAIVE = 0, POLYLAT_ENGINE_FAST = 1 } polylat_engine;

typedef enum polylat_point_format {
  POLYLAT_POINTS_RATIONAL = 0,
  POLYLAT_POINTS_DECIMAL = 1,
  POLYLAT_POINTS_BINARY = 2
} polylat_point_format;

typedef struct polylat_weights polylat_weights;
typedef struct polylat_vector polylat_vector;
typedef struct polylat_cbc_result polylat_cbc_result;
typedef struct polylat_pointset polylat_pointset;

POLYLAT_API const char* polylat_version(void);
POLYLAT_API const char* polylat_last_error(void);
POLYLAT_API void polylat_free_string(char* s);

/* Polynomials are passed as base-b encodings sum_i c_i b^i. */
POLYLAT_API polylat_status polylat_poly_parse(uint32_t b, const char* text, uint64_t* enc);
POLYLAT_API polylat_status polylat_poly_to_string(uint32_t b, uint64_t enc, char** out);
POLYLAT_API polylat_status polylat_is_irreducible(uint32_t b, uint64_t enc, int* result);
POLYLAT_API polylat_status polylat_find_irreducible(uint32_t b, int m, uint64_t* enc);
POLYLAT_API polylat_status polylat_mul_mod(uint32_t b, uint64_t x, uint64_t y, uint64_t modulus, uint64_t* out);
POLYLAT_API polylat_status polylat_primitive_element(uint32_t b, uint64_t modulus, uint64_t* xi);

/* Weights: an expression such as "product:j^-2", explicit product weights,
 * or subset weights given by bitmask (2^d entries, entry 0 ignored). */
POLYLAT_API polylat_status polylat_weights_parse(const char* expr, size_t d, polylat_weights** out);
POLYLAT_API polylat_status polylat_weights_product(const double* gammas, size_t d, polylat_weights** out);
POLYLAT_API polylat_status polylat_weights_subset(const double* by_mask, size_t d, polylat_weights** out);
POLYLAT_API polylat_status polylat_weights_pow(const polylat_weights* w, double c, polylat_weights** out);
POLYLAT_API polylat_status polylat_weights_dimension(const polylat_weights* w, size_t* d);
POLYLAT_API void polylat_weights_free(polylat_weights* w);

/* Generating vector together with its modulus (modulus 0 selects the
 * smallest irreducible of degree m). */
POLYLAT_API polylat_status polylat_vector_create(uint32_t b, int m, uint64_t modulus, const uint64_t* components,
                                                 size_t d, polylat_vector** out);
/* Text form "b m enc(p) enc(g_1) ... enc(g_d)". */
POLYLAT_API polylat_status polylat_vector_parse(const char* text, polylat_vector** out);
POLYLAT_API polylat_status polylat_vector_load(const char* path, polylat_vector** out);
POLYLAT_API polylat_status polylat_vector_to_text(const polylat_vector* v, char** out);
POLYLAT_API polylat_status polylat_vector_info(const polylat_vector* v, uint32_t* b, int* m, uint64_t* modulus,
                                               size_t* d);
POLYLAT_API polylat_status polylat_vector_components(const polylat_vector* v, uint64_t* out, size_t capacity);
POLYLAT_API void polylat_vector_free(polylat_vector* v);

/* Criteria. alpha is ignored for K and T_gamma. */
POLYLAT_API polylat_status polylat_evaluate(const polylat_vector* v, const polylat_weights* w,
                                            polylat_criterion criterion, double alpha, double* value);
/* JSON object {criterion, value, bound, satisfied, b, m, d, alpha, weights}. */
POLYLAT_API polylat_status polylat_report_json(const polylat_vector* v, const polylat_weights* w,
                                               polylat_criterion criterion, double alpha, char** json);
POLYLAT_API polylat_status polylat_theorem_bound(polylat_bound kind, uint32_t b, int m, const polylat_weights* w,
                                                 double alpha, double* value);

/* Construction. */
typedef struct polylat_cbc_config {
  uint32_t b;
  int m;
  size_t d;
  int criterion_wce; /* 0: quality function K, 1: worst-case error */
  double alpha;      /* worst-case error only */
  uint64_t modulus;  /* 0 selects the smallest irreducible */
  polylat_engine engine;
  double tie_tolerance; /* <= 0 selects the default */
  int record_scores;
  int audit;
} polylat_cbc_config;

POLYLAT_API void polylat_cbc_config_init(polylat_cbc_config* cfg);
POLYLAT_API polylat_status polylat_cbc_construct(const polylat_cbc_config* cfg, const polylat_weights* w,
                                                 polylat_cbc_result** out);
POLYLAT_API polylat_status polylat_cbc_memory_estimate(const polylat_cbc_config* cfg, const polylat_weights* w,
                                                       double* bytes);
POLYLAT_API polylat_status polylat_cbc_result_vector(const polylat_cbc_result* r, polylat_vector** out);
POLYLAT_API polylat_status polylat_cbc_result_json(const polylat_cbc_result* r, char** json);
POLYLAT_API polylat_status polylat_cbc_result_step_values(const polylat_cbc_result* r, double* out, size_t capacity);
/* Candidate scores of step s (0-based, s >= 1), indexed by encoding - 1; needs record_scores. */
POLYLAT_API polylat_status polylat_cbc_result_scores(const polylat_cbc_result* r, size_t s, double* out,
                                                     size_t capacity);
POLYLAT_API polylat_status polylat_cbc_result_audit_passed(const polylat_cbc_result* r, int* passed);
POLYLAT_API void polylat_cbc_result_free(polylat_cbc_result* r);

/* Point sets. */
POLYLAT_API polylat_status polylat_pointset_generate(const polylat_vector* v, polylat_pointset** out);
POLYLAT_API polylat_status polylat_pointset_info(const polylat_pointset* ps, uint64_t* n, size_t* d);
POLYLAT_API polylat_status polylat_pointset_numerators(const polylat_pointset* ps, size_t j, uint32_t* out,
                                                       size_t capacity);
POLYLAT_API polylat_status polylat_pointset_write(const polylat_pointset* ps, const char* path,
                                                  polylat_point_format format);
POLYLAT_API void polylat_pointset_free(polylat_pointset* ps);

/* Experiments. CSV tables are returned as strings. */
typedef struct polylat_convergence_config {
  uint32_t b;
  size_t d;
  int m_lo;
  int m_hi;
  const double* alphas;
  size_t n_alphas;
  const char* weights; /* expression for gamma; errors use gamma^alpha */
  int standard_cbc;
  int fit_lo; /* 0 with fit_hi 0: upper half of the m range */
  int fit_hi;
} polylat_convergence_config;

POLYLAT_API polylat_status polylat_convergence(const polylat_convergence_config* cfg, char** table_csv,
                                               char** slopes_csv);

typedef struct polylat_bench_config {
  uint32_t b;
  const int* ms;
  size_t n_ms;
  const size_t* ds;
  size_t n_ds;
  int reps;            /* minimum repetitions per cell */
  const char* weights;
  double min_seconds; /* keep repeating a cell until it ran this long; 0 selects 0.2, < 0 disables */
} polylat_bench_config;

POLYLAT_API polylat_status polylat_bench(const polylat_bench_config* cfg, char** csv);

#ifdef __cplusplus
}
#endif

#endif
