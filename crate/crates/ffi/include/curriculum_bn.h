#ifndef CURRICULUM_BN_H
#define CURRICULUM_BN_H

#include <stddef.h>
#include <stdint.h>

// Result of a C interface call. Values other than `Ok` and `NullPointer`
// mirror the engine's error codes.
typedef enum CbnStatus {
  CBN_STATUS_OK = 0,
  CBN_STATUS_USAGE_ERROR = 1,
  CBN_STATUS_PARSE_ERROR = 2,
  CBN_STATUS_SCHEMA_ERROR = 3,
  CBN_STATUS_VALIDATION_ERROR = 4,
  CBN_STATUS_UNKNOWN_SYMBOL = 5,
  CBN_STATUS_IMPOSSIBLE_EVIDENCE = 6,
  CBN_STATUS_DEGENERATE_BASELINE = 7,
  CBN_STATUS_SIZE_LIMIT = 8,
  CBN_STATUS_NULL_POINTER = 9,
  CBN_STATUS_BUFFER_TOO_SMALL = 10,
  CBN_STATUS_INTERNAL = 11,
} CbnStatus;

// Opaque model handle.
typedef struct CbnModel CbnModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a handle for the bundled curriculum model.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum CbnStatus cbn_model_default(struct CbnModel **out);

// Parses and validates a model document (JSON text).
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum CbnStatus cbn_model_load(const char *json, struct CbnModel **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `model` is null or a handle not yet freed.
void cbn_model_free(struct CbnModel *model);

// Answers a JSON request. `endpoint` is one of `model`, `infer`, `map`,
// `joint`, `likelihood`, `impact`, `plan`, `whatif`; request and response
// bodies are those of the HTTP service. On success `*out_json` receives a
// string to free with `cbn_string_free`.
//
// # Safety
// `model` is a live handle; `endpoint` and `request` are NUL-terminated
// strings; `out_json` is writable.
enum CbnStatus cbn_query(const struct CbnModel *model,
                         const char *endpoint,
                         const char *request,
                         char **out_json);

// Posterior distribution of `query` given comma-separated `Var=state`
// evidence, written in state order to `out_probs`. `*out_len` receives the
// number of states; if it exceeds `capacity` nothing is written and
// `BufferTooSmall` is returned.
//
// # Safety
// `model` is a live handle; strings are NUL-terminated; `out_probs` points
// to `capacity` doubles; `out_len` is writable.
enum CbnStatus cbn_posterior(const struct CbnModel *model,
                             const char *evidence,
                             const char *query,
                             double *out_probs,
                             size_t capacity,
                             size_t *out_len);

// Probability of comma-separated `Var=state` evidence.
//
// # Safety
// `model` is a live handle; `evidence` is NUL-terminated; `out` writable.
enum CbnStatus cbn_likelihood(const struct CbnModel *model, const char *evidence, double *out);

// The calling thread's last error as JSON, or null after a successful
// call. The pointer stays valid until the next call on this thread.
const char *cbn_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` is null or a string from this library not yet freed.
void cbn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CURRICULUM_BN_H */
