#ifndef STACKRES_H
#define STACKRES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Verdicts are reported separately, so a false verdict is
 * still `STACKRES_OK`.
 */
typedef enum StackresStatus {
  STACKRES_STATUS_OK = 0,
  STACKRES_STATUS_NULL_ARGUMENT = 1,
  STACKRES_STATUS_INVALID_UTF8 = 2,
  STACKRES_STATUS_PARSE_ERROR = 3,
  STACKRES_STATUS_VALIDATION_ERROR = 4,
  STACKRES_STATUS_DANGLING_REFERENCE = 5,
  STACKRES_STATUS_HYPOTHESIS_FAILURE = 6,
  STACKRES_STATUS_BOUND_EXCEEDED = 7,
  STACKRES_STATUS_OTHER_ERROR = 8,
  STACKRES_STATUS_PANIC = 9,
} StackresStatus;

/**
 * A loaded instance document.
 */
typedef struct StackresInstance StackresInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and loads `json`. With `lint`, unknown fields and invalid objects
 * are dropped instead of rejected. On success `*out` owns a new instance.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum StackresStatus stackres_instance_parse(const char *json,
                                            bool lint,
                                            struct StackresInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `instance` must come from [`stackres_instance_parse`] and not be used
 * afterwards.
 */
void stackres_instance_free(struct StackresInstance *instance);

/**
 * Validates every object of the instance. `*valid` is false when some
 * object failed; the report lists them.
 *
 * # Safety
 * Pointers must be valid; `valid` may be null.
 */
enum StackresStatus stackres_validate(const struct StackresInstance *instance,
                                      char **report,
                                      bool *valid);

/**
 * Decides whether subgroupoids `sub_left` and `sub_right` give isomorphic
 * resolutions and whether they are related by a subgroupoid equivalence,
 * across `bimodule`, or across the identity of `groupoid` when `bimodule`
 * is null. `*verdict` is true when both hold and agree.
 *
 * # Safety
 * String arguments must be NUL-terminated; `bimodule` or `groupoid` may be
 * null but not both; `verdict` may be null.
 */
enum StackresStatus stackres_fundprop(const struct StackresInstance *instance,
                                      const char *bimodule,
                                      const char *groupoid,
                                      const char *stable,
                                      const char *sub_left,
                                      const char *sub_right,
                                      char **evidence,
                                      bool *verdict);

/**
 * Runs subgroupoid `sub` of `groupoid` through the product construction
 * and back. `*ok` is true when it comes back unchanged.
 *
 * # Safety
 * String arguments must be NUL-terminated; `ok` may be null.
 */
enum StackresStatus stackres_roundtrip(const struct StackresInstance *instance,
                                       const char *groupoid,
                                       const char *stable,
                                       const char *sub,
                                       char **evidence,
                                       bool *ok);

/**
 * Message for the last failure on this thread, empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *stackres_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void stackres_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *stackres_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STACKRES_H */
