#ifndef KITAEV_NET_H
#define KITAEV_NET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KnStatus {
  KN_STATUS_OK = 0,
  KN_STATUS_NULL_POINTER = 1,
  KN_STATUS_INVALID_ARGUMENT = 2,
  KN_STATUS_CAPACITY = 3,
  KN_STATUS_CONVERGENCE = 4,
  KN_STATUS_DOMAIN = 5,
  /**
   * The requested quantity is undefined (e.g. clustering of an empty network).
   */
  KN_STATUS_UNDEFINED = 6,
  KN_STATUS_PANIC = 7,
} KnStatus;

typedef enum KnBoundary {
  KN_BOUNDARY_PERIODIC = 0,
  KN_BOUNDARY_OPEN = 1,
} KnBoundary;

typedef enum KnMeasure {
  KN_MEASURE_MUTUAL_INFORMATION = 0,
  KN_MEASURE_CONCURRENCE = 1,
  KN_MEASURE_L1_COHERENCE = 2,
} KnMeasure;

typedef enum KnNormalization {
  KN_NORMALIZATION_MAX_NORMALIZED = 0,
  KN_NORMALIZATION_RAW = 1,
} KnNormalization;

/**
 * Chain parameters.
 */
typedef struct KnChain KnChain;

/**
 * Correlation network over the sites of a state.
 */
typedef struct KnNetwork KnNetwork;

/**
 * Ground state of a chain.
 */
typedef struct KnState KnState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *kn_last_error_message(void);

/**
 * Validates the parameters and allocates a chain handle.
 */
enum KnStatus kn_chain_new(size_t n_sites,
                           double hopping,
                           double chemical_potential,
                           double pairing,
                           enum KnBoundary boundary,
                           struct KnChain **out);

void kn_chain_free(struct KnChain *chain);

/**
 * Solves for the ground state of `chain`.
 */
enum KnStatus kn_ground_state(const struct KnChain *chain, struct KnState **out);

enum KnStatus kn_state_energy(const struct KnState *state, double *out);

/**
 * `+1` for even and `-1` for odd ground states.
 */
enum KnStatus kn_state_parity(const struct KnState *state, int32_t *out);

/**
 * Nonzero when both parity sectors tied within tolerance.
 */
enum KnStatus kn_state_degenerate(const struct KnState *state, int32_t *out);

/**
 * Number of amplitudes, `2^N`.
 */
enum KnStatus kn_state_dimension(const struct KnState *state, size_t *out);

/**
 * Copies the amplitudes into `re` and `im`, each of length at least the
 * state dimension.
 */
enum KnStatus kn_state_amplitudes(const struct KnState *state, double *re, double *im, size_t len);

void kn_state_free(struct KnState *state);

/**
 * Builds the `measure` network of `state` with the default spin-picture
 * reduction and natural logarithms.
 */
enum KnStatus kn_network_build(const struct KnState *state,
                               enum KnMeasure measure,
                               enum KnNormalization normalization,
                               struct KnNetwork **out);

enum KnStatus kn_network_size(const struct KnNetwork *net, size_t *out);

/**
 * Clustering coefficient; `KN_STATUS_UNDEFINED` for networks without
 * open triplets.
 */
enum KnStatus kn_network_clustering(const struct KnNetwork *net, double *out);

/**
 * Density of node `node` on raw weights.
 */
enum KnStatus kn_network_density(const struct KnNetwork *net, size_t node, double *out);

/**
 * Copies the row-major `N x N` raw weight matrix into `out`.
 */
enum KnStatus kn_network_weights(const struct KnNetwork *net, double *out, size_t len);

void kn_network_free(struct KnNetwork *net);

/**
 * Writes the ascending potentials `2 sqrt(w^2 - Delta^2) cos(pi k / (N+1))`
 * to `out` and their count to `written`. `KN_STATUS_DOMAIN` when
 * `|Delta| > |w|`.
 */
enum KnStatus kn_majorana_zero_modes(size_t n_sites,
                                     double hopping,
                                     double pairing,
                                     double *out,
                                     size_t len,
                                     size_t *written);

/**
 * `2 sqrt(w^2 - Delta^2)`.
 */
enum KnStatus kn_factorization_potential(double hopping, double pairing, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KITAEV_NET_H */
