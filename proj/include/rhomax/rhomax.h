/* SPDX-License-Identifier: Apache-2.0 */
/* Public C interface to the rho-localized maximal operator toolkit.
 * All strings returned by the library are owned by the library and stay valid
 * until the owning object is destroyed (or, for rhomax_last_error, until the next
 * call on the same thread). */
#ifndef RHOMAX_RHOMAX_H
#define RHOMAX_RHOMAX_H

#include <stddef.h>

#if defined(RHOMAX_BUILDING_LIBRARY)
#define RHOMAX_API __attribute__((visibility("default")))
#else
#define RHOMAX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rhomax_status {
  RHOMAX_OK = 0,
  RHOMAX_INVALID_ARGUMENT = 1,
  RHOMAX_CONFIG = 2,
  RHOMAX_DOMAIN = 3,
  RHOMAX_PRECONDITION = 4,
  RHOMAX_IO = 5,
  RHOMAX_INTERNAL = 6
} rhomax_status;

typedef struct rhomax_context rhomax_context;
typedef struct rhomax_result rhomax_result;

RHOMAX_API const char* rhomax_version(void);
RHOMAX_API const char* rhomax_status_string(rhomax_status status);
/* Message of the last failing call on this thread ("" if none). */
RHOMAX_API const char* rhomax_last_error(void);

RHOMAX_API rhomax_status rhomax_context_create(rhomax_context** out);
RHOMAX_API void rhomax_context_destroy(rhomax_context* ctx);
/* 0 means one worker per hardware thread. */
RHOMAX_API rhomax_status rhomax_context_set_threads(rhomax_context* ctx, unsigned threads);

RHOMAX_API size_t rhomax_subcommand_count(void);
RHOMAX_API const char* rhomax_subcommand_name(size_t index);

/* Parses and validates a config (with key=value overrides) without running it. */
RHOMAX_API rhomax_status rhomax_validate_config(const char* config_json, const char* const* overrides,
                                                size_t n_overrides);

/* Runs a subcommand. config_json may be NULL for "selftest". */
RHOMAX_API rhomax_status rhomax_run(rhomax_context* ctx, const char* subcommand, const char* config_json,
                                    const char* const* overrides, size_t n_overrides, rhomax_result** out);
RHOMAX_API const char* rhomax_result_json(const rhomax_result* result);
RHOMAX_API const char* rhomax_result_csv(const rhomax_result* result);
/* "" when the subcommand has no verdict. */
RHOMAX_API const char* rhomax_result_verdict(const rhomax_result* result);
/* 1 for a FAIL verdict, else 0. */
RHOMAX_API int rhomax_result_failed(const rhomax_result* result);
RHOMAX_API void rhomax_result_destroy(rhomax_result* result);

/* Primitives. Specs are JSON strings in the config format. */
RHOMAX_API rhomax_status rhomax_young_eval(const char* spec_json, double t, double* out);
RHOMAX_API rhomax_status rhomax_young_inverse(const char* spec_json, double y, double* out);
RHOMAX_API rhomax_status rhomax_young_conjugate_eval(const char* spec_json, double t, double* out);
RHOMAX_API rhomax_status rhomax_sufficient_sigma(double theta, double N0, double N1, double c, double* out);
RHOMAX_API rhomax_status rhomax_dini_integral(const char* growth_json, const char* eta_json, double t, double* value,
                                              int* diverges);
/* f and out hold N^d values in row-major order on [-L, L]^d. */
RHOMAX_API rhomax_status rhomax_hl_maximal(int d, double L, int N, const char* rho_json, double sigma,
                                           const double* f, double* out);
RHOMAX_API rhomax_status rhomax_orlicz_maximal(int d, double L, int N, const char* rho_json, const char* eta_json,
                                               double sigma, const double* f, double* out);
RHOMAX_API rhomax_status rhomax_luxemburg_average(int d, double L, int N, const double* f, const double* center,
                                                  double half_side, const char* eta_json, double* out);
RHOMAX_API rhomax_status rhomax_critical_radius(const char* rho_json, const double* x, int d, double* out);

#ifdef __cplusplus
}
#endif

#endif /* RHOMAX_RHOMAX_H */
