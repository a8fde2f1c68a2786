#ifndef PACKSET_H
#define PACKSET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every fallible call.
 */
typedef enum PacksetStatus {
  PACKSET_STATUS_OK = 0,
  PACKSET_STATUS_NULL_POINTER = 1,
  PACKSET_STATUS_INVALID_ARGUMENT = 2,
  PACKSET_STATUS_NOT_PRIME = 3,
  PACKSET_STATUS_ENUMERATION_TOO_LARGE = 4,
  PACKSET_STATUS_WRONG_RESIDUE_CLASS = 5,
  PACKSET_STATUS_NOT_CERTIFIED = 6,
  PACKSET_STATUS_MALFORMED = 7,
  PACKSET_STATUS_NO_PRIME_FOUND = 8,
  PACKSET_STATUS_BUDGET_EXCEEDED = 9,
  PACKSET_STATUS_CERTIFICATION_CONTRADICTION = 10,
  PACKSET_STATUS_BUFFER_TOO_SMALL = 11,
  PACKSET_STATUS_INTERNAL = 12,
} PacksetStatus;

/**
 * Certification state of a packing set.
 */
typedef enum PacksetVerdict {
  PACKSET_VERDICT_UNVERIFIED = 0,
  PACKSET_VERDICT_VERIFIED_EXHAUSTIVE = 1,
  PACKSET_VERDICT_VERIFIED_SUFFICIENT = 2,
  PACKSET_VERDICT_REFUTED = 3,
} PacksetVerdict;

/**
 * Opaque code with its precomputed syndrome table.
 */
typedef struct PacksetCode PacksetCode;

/**
 * Opaque packing set.
 */
typedef struct PacksetPacking PacksetPacking;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *packset_last_error_message(void);

const char *packset_version(void);

bool packset_is_prime(uint64_t n);

/**
 * Largest size allowed by the syndrome-count bound; 0 on invalid input.
 */
uint64_t packset_max_b_upper(uint64_t a, uint32_t t, uint64_t q);

/**
 * Smallest size any maximal packing set can have; 0 on invalid input.
 */
uint64_t packset_min_b_maximal(uint64_t a, uint32_t t, uint64_t q);

/**
 * Powers of `lambda + 1` modulo `p`.
 */
enum PacksetStatus packset_powers_new(uint64_t p,
                                      uint64_t lambda,
                                      uint32_t t,
                                      struct PacksetPacking **out);

/**
 * Quadratic residues modulo `p`.
 */
enum PacksetStatus packset_qr_new(uint64_t p, struct PacksetPacking **out);

/**
 * Power basis of `F_{p^k}`.
 */
enum PacksetStatus packset_basis_new(uint64_t p,
                                     uint32_t k,
                                     uint64_t seed,
                                     struct PacksetPacking **out);

/**
 * Randomized roots-of-unity construction; the returned set is `B0`.
 * `p_out` receives the prime, if non-null.
 */
enum PacksetStatus packset_cyclotomic_new(uint64_t k_scale,
                                          uint64_t q_scale,
                                          uint64_t lambda,
                                          uint32_t t,
                                          uint64_t seed,
                                          uint64_t *p_out,
                                          struct PacksetPacking **out);

/**
 * Packing set over `F_p` from element and alphabet arrays.
 */
enum PacksetStatus packset_packing_new(uint64_t p,
                                       const uint64_t *elements,
                                       size_t n_elements,
                                       const uint64_t *alphabet,
                                       size_t n_alphabet,
                                       uint32_t t,
                                       struct PacksetPacking **out);

/**
 * Parses the JSON form of a packing set.
 */
enum PacksetStatus packset_packing_from_json(const char *json, struct PacksetPacking **out);

/**
 * JSON form of a packing set. Release the string with
 * [`packset_string_free`].
 */
enum PacksetStatus packset_packing_to_json(const struct PacksetPacking *ps, char **out);

void packset_string_free(char *s);

void packset_packing_free(struct PacksetPacking *ps);

/**
 * Number of elements; 0 for NULL.
 */
size_t packset_packing_len(const struct PacksetPacking *ps);

/**
 * Copies the packed elements into `buf` (capacity `cap`).
 */
enum PacksetStatus packset_packing_elements(const struct PacksetPacking *ps,
                                            uint64_t *buf,
                                            size_t cap);

enum PacksetVerdict packset_packing_status(const struct PacksetPacking *ps);

/**
 * Runs the exhaustive verifier and records the verdict on the handle.
 */
enum PacksetStatus packset_packing_verify(struct PacksetPacking *ps,
                                          uint64_t cap,
                                          enum PacksetVerdict *verdict);

/**
 * Builds the code and its syndrome table from a certified packing set.
 * The packing handle is not consumed.
 */
enum PacksetStatus packset_code_new(const struct PacksetPacking *ps, struct PacksetCode **out);

void packset_code_free(struct PacksetCode *code);

/**
 * Code length `B`; 0 for NULL.
 */
size_t packset_code_len(const struct PacksetCode *code);

/**
 * Encodes `message` (length `B - 1`) into `codeword` (length `B`).
 */
enum PacksetStatus packset_code_encode(const struct PacksetCode *code,
                                       const uint64_t *message,
                                       size_t message_len,
                                       uint64_t *codeword,
                                       size_t codeword_len);

/**
 * Decodes `received` (length `B`). On success writes the message
 * (length `B - 1`) and sets `corrected`; an uncorrectable word returns
 * `Ok` with `corrected = false`.
 */
enum PacksetStatus packset_code_decode(const struct PacksetCode *code,
                                       const uint64_t *received,
                                       size_t received_len,
                                       uint64_t *message,
                                       size_t message_len,
                                       bool *corrected);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PACKSET_H */
