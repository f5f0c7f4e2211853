#ifndef CHAINFORGE_H
#define CHAINFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. The non-zero values 2, 3 and 4 match the exit codes
 * of the command-line tool.
 */
typedef enum CfStatus {
  CF_STATUS_OK = 0,
  /**
   * Malformed input, failed precondition or invalid data.
   */
  CF_STATUS_SPEC = 2,
  /**
   * An enumeration bound was exceeded.
   */
  CF_STATUS_RESOURCE = 3,
  /**
   * An internal consistency check failed.
   */
  CF_STATUS_INVARIANT = 4,
  /**
   * A required pointer argument was null.
   */
  CF_STATUS_NULL_ARGUMENT = 5,
  /**
   * A string argument was not valid UTF-8.
   */
  CF_STATUS_INVALID_UTF8 = 6,
  /**
   * A value does not fit the output type.
   */
  CF_STATUS_OVERFLOW = 7,
  /**
   * The library panicked; the handle arguments should be considered lost.
   */
  CF_STATUS_PANIC = 8,
} CfStatus;

/**
 * A validated chain of subgroups.
 */
typedef struct CfChain CfChain;

/**
 * A family of unitriangular subgroups over a list of primes.
 */
typedef struct CfFamily CfFamily;

/**
 * A finite group.
 */
typedef struct CfGroup CfGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cf_last_error(void);

/**
 * Library version as a static string.
 */
const char *cf_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void cf_string_free(char *s);

/**
 * Parses a group descriptor. `max_elements` bounds enumeration (0 for the
 * default).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CfStatus cf_group_from_json(const char *json, size_t max_elements, struct CfGroup **out);

/**
 * # Safety
 * `group` must come from [`cf_group_from_json`] and not have been freed.
 */
void cf_group_free(struct CfGroup *group);

/**
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum CfStatus cf_group_order(const struct CfGroup *group, uint64_t *out);

/**
 * Order of the normal core of a subgroup given by a subgroup descriptor.
 *
 * # Safety
 * `group` must be a live handle, `subgroup_json` NUL-terminated, `out`
 * writable.
 */
enum CfStatus cf_core_order(const struct CfGroup *group, const char *subgroup_json, uint64_t *out);

/**
 * Parses a chain spec (explicit or family form) into a chain.
 *
 * # Safety
 * `json` must be NUL-terminated and `out` writable.
 */
enum CfStatus cf_chain_from_json(const char *json, size_t max_elements, struct CfChain **out);

/**
 * # Safety
 * `chain` must come from [`cf_chain_from_json`] and not have been freed.
 */
void cf_chain_free(struct CfChain *chain);

/**
 * # Safety
 * `chain` must be a live handle and `out` writable.
 */
enum CfStatus cf_chain_depth(const struct CfChain *chain, size_t *out);

/**
 * Index `[G_0 : G_level]`.
 *
 * # Safety
 * `chain` must be a live handle and `out` writable.
 */
enum CfStatus cf_chain_index(const struct CfChain *chain, size_t level, uint64_t *out);

/**
 * Stability report of the chain as JSON.
 *
 * # Safety
 * `chain` must be a live handle and `out` writable; free the result with
 * [`cf_string_free`].
 */
enum CfStatus cf_chain_report_json(const struct CfChain *chain, char **out);

/**
 * Parses a family spec `{"primes":[…],"bits":[…]}`.
 *
 * # Safety
 * `json` must be NUL-terminated and `out` writable.
 */
enum CfStatus cf_family_from_json(const char *json, struct CfFamily **out);

/**
 * # Safety
 * `family` must come from [`cf_family_from_json`] and not have been freed.
 */
void cf_family_free(struct CfFamily *family);

/**
 * Stability report of the family computed from its product form, as JSON.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum CfStatus cf_family_report_json(const struct CfFamily *family, char **out);

/**
 * Tail comparison of two families over their first `window` indices (0 for
 * all of them). `*equivalent` is set to 1 when the bits agree on a tail of
 * the window, 0 otherwise; `verdict_json` may be null.
 *
 * # Safety
 * Handles must be live, `equivalent` writable, and `verdict_json` null or
 * writable.
 */
enum CfStatus cf_family_compare(const struct CfFamily *left,
                                const struct CfFamily *right,
                                size_t window,
                                int32_t *equivalent,
                                char **verdict_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAINFORGE_H */
