#ifndef CONGESTION_GIBBS_H
#define CONGESTION_GIBBS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  CG_STATUS_INVALID_UTF8 = 2,
  CG_STATUS_PARSE_ERROR = 3,
  CG_STATUS_INVALID_GAME = 4,
  CG_STATUS_INVALID_ARGUMENT = 5,
  CG_STATUS_UNSUPPORTED = 6,
  CG_STATUS_INFEASIBLE = 7,
  CG_STATUS_GUARD_EXCEEDED = 8,
  CG_STATUS_SAMPLING_FAILED = 9,
  CG_STATUS_BUFFER_TOO_SMALL = 10,
  CG_STATUS_PANIC = 11,
} CgStatus;

/**
 * Second-stage weights for capacitated k-uniform games.
 */
typedef enum CgWeightMode {
  CG_WEIGHT_MODE_EXACT = 0,
  CG_WEIGHT_MODE_MCKAY = 1,
} CgWeightMode;

typedef enum CgDynamics {
  CG_DYNAMICS_LOGIT = 0,
  CG_DYNAMICS_RELAXED_LOGIT = 1,
} CgDynamics;

/**
 * Opaque game handle.
 */
typedef struct CgGame CgGame;

/**
 * Copies the calling thread's last error message into `buf` as a
 * NUL-terminated string, truncating if needed. Returns the message length
 * without the terminator.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t cg_last_error_message(char *buf, size_t len);

/**
 * Parses a game description. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CgStatus cg_game_parse(const char *text, struct CgGame **out);

/**
 * Releases a handle from [`cg_game_parse`]. Null is ignored.
 *
 * # Safety
 * `game` must be null or a handle not yet freed.
 */
void cg_game_free(struct CgGame *game);

/**
 * Number of players, or 0 for a null handle.
 *
 * # Safety
 * `game` must be null or a live handle.
 */
size_t cg_game_players(const struct CgGame *game);

/**
 * Number of strategies of `player`, or 0 if out of range.
 *
 * # Safety
 * `game` must be null or a live handle.
 */
size_t cg_game_strategies(const struct CgGame *game, size_t player);

/**
 * Rosenthal's potential of a profile; `+inf` when a capacity is exceeded.
 *
 * # Safety
 * `choices` must hold `len` entries and `out` must be valid.
 */
enum CgStatus cg_game_potential(const struct CgGame *game,
                                const size_t *choices,
                                size_t len,
                                double *out);

/**
 * Whether a profile is a pure Nash equilibrium.
 *
 * # Safety
 * `choices` must hold `len` entries and `out` must be valid.
 */
enum CgStatus cg_game_is_nash(const struct CgGame *game,
                              const size_t *choices,
                              size_t len,
                              bool *out);

/**
 * Draws `count` approximate Gibbs samples at temperature `temperature` into
 * `out` (`count * players` entries). `mode` only matters for k-uniform games.
 *
 * # Safety
 * `game` must be a live handle and `out` valid for `out_len` entries.
 */
enum CgStatus cg_sample_gibbs(const struct CgGame *game,
                              double temperature,
                              double eps,
                              double mix_constant,
                              enum CgWeightMode mode,
                              uint64_t seed,
                              size_t count,
                              size_t *out,
                              size_t out_len);

/**
 * Draws `count` approximately uniform pure Nash equilibria. `attempts`, if
 * not null, receives the number of chain runs each draw took.
 *
 * # Safety
 * `out` must be valid for `out_len` entries and `attempts` null or valid
 * for `count` entries.
 */
enum CgStatus cg_sample_pne(const struct CgGame *game,
                            double eps,
                            double mix_constant,
                            uint64_t seed,
                            size_t count,
                            size_t *out,
                            size_t out_len,
                            size_t *attempts);

/**
 * Final states of `count` independent chains of `steps` steps each.
 *
 * # Safety
 * `out` must be valid for `out_len` entries.
 */
enum CgStatus cg_run_dynamics(const struct CgGame *game,
                              enum CgDynamics dynamics,
                              double temperature,
                              uint64_t steps,
                              uint64_t seed,
                              size_t count,
                              size_t *out,
                              size_t out_len);

/**
 * Exact number of simple bipartite graphs with row degrees `k` and column
 * degrees `alpha`, written as a NUL-terminated decimal string. `needed`,
 * if not null, receives the buffer size required.
 *
 * # Safety
 * `k` and `alpha` must hold the stated lengths and `buf` be valid for
 * `buf_len` bytes.
 */
enum CgStatus cg_count_bipartite(const size_t *k,
                                 size_t k_len,
                                 const size_t *alpha,
                                 size_t alpha_len,
                                 char *buf,
                                 size_t buf_len,
                                 size_t *needed);

/**
 * Natural log of the asymptotic bipartite count estimate.
 *
 * # Safety
 * `k` and `alpha` must hold the stated lengths and `out` must be valid.
 */
enum CgStatus cg_mckay_log_estimate(const size_t *k,
                                    size_t k_len,
                                    const size_t *alpha,
                                    size_t alpha_len,
                                    double *out);

#endif  /* CONGESTION_GIBBS_H */
