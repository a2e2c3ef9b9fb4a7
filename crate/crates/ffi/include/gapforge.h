#ifndef GAPFORGE_H
#define GAPFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GfStatus {
  GF_STATUS_OK = 0,
  GF_STATUS_NULL_POINTER = 1,
  GF_STATUS_INVALID_UTF8 = 2,
  GF_STATUS_PARSE = 3,
  GF_STATUS_INVALID_PARAMETER = 4,
  GF_STATUS_GAP_CLOSED = 5,
  GF_STATUS_CAP_EXCEEDED = 6,
  GF_STATUS_ARITHMETIC = 7,
  GF_STATUS_WRONG_INSTANCE_KIND = 8,
  GF_STATUS_PANIC = 99,
} GfStatus;

/**
 * Verification outcome.
 */
typedef enum GfVerdict {
  GF_VERDICT_YES_CONFIRMED = 0,
  GF_VERDICT_NO_CONFIRMED = 1,
  GF_VERDICT_GAP_VIOLATION = 2,
  GF_VERDICT_INCONCLUSIVE = 3,
} GfVerdict;

typedef struct GfCircuit GfCircuit;

typedef struct GfCode GfCode;

/**
 * An MDP or NCP instance.
 */
typedef struct GfInstance GfInstance;

typedef struct GfQuadSys GfQuadSys;

typedef struct GfReport GfReport;

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next `gf_*` call on the same thread.
 */
const char *gf_last_error_message(void);

/**
 * Releases a string returned by any `*_to_text` function.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library.
 */
void gf_string_free(char *s);

/**
 * Parses `.circ` text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum GfStatus gf_circuit_parse(const char *text, struct GfCircuit **out);

/**
 * Exhaustive satisfiability of the circuit.
 *
 * # Safety
 * `c` must come from `gf_circuit_parse`; `out` must be writable.
 */
enum GfStatus gf_circuit_is_satisfiable(const struct GfCircuit *c, bool *out);

/**
 * # Safety
 * `c` must be NULL or come from `gf_circuit_parse`.
 */
void gf_circuit_free(struct GfCircuit *c);

/**
 * Compiles a circuit into a homogeneous quadratic system over `F_q`.
 *
 * # Safety
 * `c` must come from `gf_circuit_parse`; `out` must be writable.
 */
enum GfStatus gf_compile(const struct GfCircuit *c, uint32_t q, struct GfQuadSys **out);

/**
 * # Safety
 * `text` must be NUL-terminated; `out` must be writable.
 */
enum GfStatus gf_quadsys_from_text(const char *text, struct GfQuadSys **out);

/**
 * # Safety
 * `s` must come from this library; `out` must be writable.
 */
enum GfStatus gf_quadsys_to_text(const struct GfQuadSys *s, char **out);

/**
 * # Safety
 * `s` must be NULL or come from this library.
 */
void gf_quadsys_free(struct GfQuadSys *s);

/**
 * Hadamard code of dimension `n` over `F_q`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfStatus gf_code_hadamard(uint32_t q, size_t n, struct GfCode **out);

/**
 * Balanced Reed-Solomon/Hadamard concatenation with parameter
 * `eps_num / eps_den`, distance refined exhaustively when within `cap`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfStatus gf_code_balanced(uint32_t q,
                               size_t n,
                               uint64_t eps_num,
                               uint64_t eps_den,
                               uint64_t cap,
                               struct GfCode **out);

/**
 * Exact minimum distance by enumeration of at most `cap` codewords.
 *
 * # Safety
 * `code` must come from this library; `out` must be writable.
 */
enum GfStatus gf_code_min_distance(const struct GfCode *code, uint64_t cap, uint64_t *out);

/**
 * Writes block length and dimension.
 *
 * # Safety
 * `code` must come from this library; both outputs must be writable.
 */
enum GfStatus gf_code_shape(const struct GfCode *code, size_t *block_len, size_t *dim);

/**
 * # Safety
 * `text` must be NUL-terminated; `out` must be writable.
 */
enum GfStatus gf_code_from_text(const char *text, struct GfCode **out);

/**
 * # Safety
 * `code` must come from this library; `out` must be writable.
 */
enum GfStatus gf_code_to_text(const struct GfCode *code, char **out);

/**
 * # Safety
 * `code` must be NULL or come from this library.
 */
void gf_code_free(struct GfCode *code);

/**
 * Maps a quadratic system through `code` to an MDP instance.
 *
 * # Safety
 * `sys` and `code` must come from this library; `out` must be writable.
 */
enum GfStatus gf_reduce(const struct GfQuadSys *sys,
                        const struct GfCode *code,
                        bool distinguished,
                        struct GfInstance **out);

/**
 * `t`-fold tensor power of an MDP instance.
 *
 * # Safety
 * `inst` must come from this library; `out` must be writable.
 */
enum GfStatus gf_amplify(const struct GfInstance *inst, uint32_t t, struct GfInstance **out);

/**
 * Affine slice of a distinguished MDP instance.
 *
 * # Safety
 * `inst` must come from this library; `out` must be writable.
 */
enum GfStatus gf_to_ncp(const struct GfInstance *inst, struct GfInstance **out);

/**
 * Returns true for NCP instances.
 *
 * # Safety
 * `inst` must come from this library; `out` must be writable.
 */
enum GfStatus gf_instance_is_ncp(const struct GfInstance *inst, bool *out);

/**
 * Exact optimum. Writes -1 when the subspace holds no nonzero vector.
 *
 * # Safety
 * `inst` must come from this library; `out` must be writable.
 */
enum GfStatus gf_solve(const struct GfInstance *inst, uint64_t cap, int64_t *out);

/**
 * # Safety
 * `text` must be NUL-terminated; `out` must be writable.
 */
enum GfStatus gf_instance_from_text(const char *text, struct GfInstance **out);

/**
 * # Safety
 * `inst` must come from this library; `out` must be writable.
 */
enum GfStatus gf_instance_to_text(const struct GfInstance *inst, char **out);

/**
 * # Safety
 * `inst` must be NULL or come from this library.
 */
void gf_instance_free(struct GfInstance *inst);

/**
 * Checks an instance against its thresholds. `circuit` may be NULL; when
 * given, the verdict is cross-checked against its satisfiability.
 *
 * # Safety
 * `inst` must come from this library, `circuit` must be NULL or come from
 * `gf_circuit_parse`, and `out` must be writable.
 */
enum GfStatus gf_verify(const struct GfInstance *inst,
                        const struct GfCircuit *circuit,
                        uint64_t cap,
                        struct GfReport **out);

/**
 * # Safety
 * `rep` must come from `gf_verify`; `out` must be writable.
 */
enum GfStatus gf_report_verdict(const struct GfReport *rep, enum GfVerdict *out);

/**
 * Oracle optimum recorded in the report, or -1 when absent.
 *
 * # Safety
 * `rep` must come from `gf_verify`; `out` must be writable.
 */
enum GfStatus gf_report_oracle_value(const struct GfReport *rep, int64_t *out);

/**
 * Key=value rendering of the report, without timing.
 *
 * # Safety
 * `rep` must come from `gf_verify`; `out` must be writable.
 */
enum GfStatus gf_report_to_text(const struct GfReport *rep, char **out);

/**
 * # Safety
 * `rep` must be NULL or come from `gf_verify`.
 */
void gf_report_free(struct GfReport *rep);

#endif  /* GAPFORGE_H */
