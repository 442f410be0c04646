#ifndef BSGROUPOID_H
#define BSGROUPOID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BsgStatus {
  BSG_STATUS_OK = 0,
  BSG_STATUS_NULL_POINTER = 1,
  BSG_STATUS_INVALID_UTF8 = 2,
  BSG_STATUS_INVALID_ARGUMENT = 3,
  BSG_STATUS_VERIFICATION_FAILED = 4,
  BSG_STATUS_PANIC = 5,
} BsgStatus;

/**
 * A validated finite measured groupoid.
 */
typedef struct BsgGroupoid BsgGroupoid;

/**
 * BS(p,q) parameters.
 */
typedef struct BsgParams BsgParams;

/**
 * A word in a and t.
 */
typedef struct BsgWord BsgWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library that has not
 * been freed yet.
 */
void bsg_string_free(char *s);

/**
 * Copies the calling thread's last error message into `*out`; `*out` is set
 * to null if there is none.
 *
 * # Safety
 * `out` must be a valid pointer to writable `char *` storage.
 */
enum BsgStatus bsg_last_error(char **out);

/**
 * Library version, a static string that must not be freed.
 */
const char *bsg_version(void);

/**
 * Validates 2 ≤ |p| ≤ |q| and stores BS(p,q) in `*out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable handle storage.
 */
enum BsgStatus bsg_params_new(int64_t p, int64_t q, struct BsgParams **out);

/**
 * # Safety
 * `h` must be null or a handle from [`bsg_params_new`] not yet freed.
 */
void bsg_params_free(struct BsgParams *h);

/**
 * Parses a word such as `"t^2 a^-5 T"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid handle storage.
 */
enum BsgStatus bsg_word_parse(const char *text, struct BsgWord **out);

/**
 * # Safety
 * `h` must be null or a handle from [`bsg_word_parse`] not yet freed.
 */
void bsg_word_free(struct BsgWord *h);

/**
 * 𝔪(w) as a reduced fraction such as `"9/4"`.
 *
 * # Safety
 * Handles must be live; `out` must be valid `char *` storage.
 */
enum BsgStatus bsg_modular(const struct BsgParams *params, const struct BsgWord *word, char **out);

/**
 * Britton normal form of w, written as a word.
 *
 * # Safety
 * Handles must be live; `out` must be valid `char *` storage.
 */
enum BsgStatus bsg_normal_form(const struct BsgParams *params,
                               const struct BsgWord *word,
                               char **out);

/**
 * `*out` = 1 if w is the identity of BS(p,q), else 0.
 *
 * # Safety
 * Handles must be live; `out` must be a valid `int` pointer.
 */
enum BsgStatus bsg_is_identity(const struct BsgParams *params,
                               const struct BsgWord *word,
                               int *out);

/**
 * Reads and validates a groupoid in the JSON layout of `groupoid validate`.
 * A table that breaks an axiom gives `VerificationFailed`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid handle storage.
 */
enum BsgStatus bsg_groupoid_from_json(const char *json, struct BsgGroupoid **out);

/**
 * # Safety
 * `h` must be null or a handle from [`bsg_groupoid_from_json`] not yet freed.
 */
void bsg_groupoid_free(struct BsgGroupoid *h);

/**
 * Unit and arrow counts.
 *
 * # Safety
 * `g` must be live; both outputs must be valid `size_t` pointers.
 */
enum BsgStatus bsg_groupoid_size(const struct BsgGroupoid *g, uintptr_t *units, uintptr_t *arrows);

/**
 * Type of the Radon-Nikodym cocycle as JSON, e.g. `{"type":"II"}`.
 *
 * # Safety
 * `g` must be live; `out` must be valid `char *` storage.
 */
enum BsgStatus bsg_groupoid_type(const struct BsgGroupoid *g, char **out);

/**
 * 𝔇·𝔌 on the t-arrows of the level-(k,l) model. Writes the common value and
 * returns `VerificationFailed` if it differs from |q/p| anywhere.
 *
 * # Safety
 * `params` must be live; `out` must be valid `char *` storage.
 */
enum BsgStatus bsg_level_model_product(const struct BsgParams *params,
                                       uint32_t k,
                                       uint32_t l,
                                       char **out);

/**
 * Runs the command-line frontend on `argv[0..argc]` (without the program
 * name) and captures its output. `*exit_code` follows the CLI contract:
 * 0 success, 1 verification failure, 2 usage error.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings (it may be null when
 * `argc` is 0). The three outputs must be valid pointers.
 */
enum BsgStatus bsg_cli_run(const char *const *argv,
                           uintptr_t argc,
                           char **out_stdout,
                           char **out_stderr,
                           int *exit_code);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BSGROUPOID_H */
