/* C interface to the Carleman kernel library.
 *
 * Handles are opaque. Every call returns a ck_status; on failure the message
 * is available from ck_last_error() on the calling thread. Strings handed out
 * by the library are released with ck_string_free. Built handles are
 * immutable, so evaluation calls may run concurrently on one pipeline.
 */
#ifndef CARLEMAN_H
#define CARLEMAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(CARLEMAN_BUILDING_LIBRARY)
#define CK_API __attribute__((visibility("default")))
#else
#define CK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ck_status {
  CK_OK = 0,
  CK_INVALID_ARGUMENT = 1,
  CK_PARSE = 2,
  CK_RANGE = 3,
  CK_BUDGET = 4,
  CK_NUMERIC = 5,
  CK_IO = 6,
  CK_INTERNAL = 99
} ck_status;

typedef struct ck_operator ck_operator;
typedef struct ck_pipeline ck_pipeline;

CK_API const char* ck_version(void);
CK_API const char* ck_last_error(void);
CK_API void ck_string_free(char* s);

/* Reads the CARLEMAN_* environment into the config text; *out is a new string. */
CK_API ck_status ck_config_apply_env(const char* config_json, char** out);

CK_API ck_status ck_operator_load(const char* config_json, ck_operator** out);
CK_API void ck_operator_free(ck_operator* op);
CK_API ck_status ck_operator_dim(const ck_operator* op, size_t* dim);
/* Validation report (JSON) for a full config; *pass is 1 when every operator check passes. */
CK_API ck_status ck_validate(const char* config_json, char** report, int* pass);

CK_API ck_status ck_pipeline_build(const char* config_json, ck_pipeline** out);
CK_API void ck_pipeline_free(ck_pipeline* p);
CK_API ck_status ck_pipeline_size(const ck_pipeline* p, size_t* frame_size);
CK_API ck_status ck_pipeline_model_text(const ck_pipeline* p, char** out);
CK_API ck_status ck_pipeline_assignment_report(const ck_pipeline* p, char** out);

/* d^{i+j} K / ds^i dt^j at (s, t); residual may be NULL. */
CK_API ck_status ck_kernel_eval(const ck_pipeline* p, int i, int j, double s, double t, double* re, double* im,
                                double* residual);
/* Row-major grid: values for s[a], t[b] land at index a * nt + b. */
CK_API ck_status ck_kernel_eval_grid(const ck_pipeline* p, int i, int j, const double* s, size_t ns, const double* t,
                                     size_t nt, double* re, double* im);
/* Frame coefficients of the Carleman function k(s) (interleaved re, im) and its norm. */
CK_API ck_status ck_carleman_function(const ck_pipeline* p, double s, double* coeffs, size_t len, double* norm);

/* Verification suite; seed overrides the config seed. *all_pass is 1 when every check passes. */
CK_API ck_status ck_pipeline_verify(const ck_pipeline* p, uint64_t seed, char** report, int* all_pass);

/* CSV "s,w<i>" sample table of the real reduced wavelet. */
CK_API ck_status ck_wavelet_sample_table(const ck_pipeline* p, int i, double lo, double hi, int points, char** out);

#ifdef __cplusplus
}
#endif

#endif
