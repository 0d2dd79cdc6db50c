#ifndef RCMODEL_H
#define RCMODEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every fallible entry point.
typedef enum RcStatus {
  RC_STATUS_OK = 0,
  RC_STATUS_NULL_POINTER = 1,
  RC_STATUS_INVALID_ARGUMENT = 2,
  RC_STATUS_INVALID_REGION = 3,
  RC_STATUS_CAPACITY = 4,
  RC_STATUS_NULL_CONDITIONING = 5,
  RC_STATUS_NOT_INCREASING = 6,
  RC_STATUS_UNSATISFIABLE = 7,
  RC_STATUS_BUFFER_TOO_SMALL = 8,
  RC_STATUS_IO = 9,
  RC_STATUS_INTERNAL = 10,
  RC_STATUS_PANIC = 11,
} RcStatus;

// Crossing direction selector.
typedef enum RcDirection {
  RC_DIRECTION_HORIZONTAL = 0,
  RC_DIRECTION_VERTICAL = 1,
} RcDirection;

// Boundary condition selector.
typedef enum RcBoundary {
  RC_BOUNDARY_FREE = 0,
  RC_BOUNDARY_WIRED = 1,
} RcBoundary;

// Update rule for rc_chain_sweep.
typedef enum RcAlgorithm {
  RC_ALGORITHM_HEAT_BATH = 0,
  RC_ALGORITHM_EDWARDS_SOKAL = 1,
} RcAlgorithm;

// Kind of a coupled-chain transition.
typedef enum RcTransitionKind {
  RC_TRANSITION_KIND_OPEN = 0,
  RC_TRANSITION_KIND_CLOSE_BOTH = 1,
  RC_TRANSITION_KIND_CLOSE_PI = 2,
} RcTransitionKind;

// A single-configuration Markov chain.
typedef struct RcChain RcChain;

// The pivot-edge coupled chain.
typedef struct RcCoupling RcCoupling;

// An event on edge configurations.
typedef struct RcEvent RcEvent;

// Cluster weight and edge weights.
typedef struct RcParams RcParams;

// A finite region of a lattice.
typedef struct RcRegion RcRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string.
const char *rc_version(void);

// Message of the last failing call on this thread, or null if none.
// The pointer stays valid until the next failing call on this thread.
const char *rc_last_error_message(void);

// Critical edge weight of a built-in or custom lattice at cluster weight `q`.
enum RcStatus rc_critical_point(const char *lattice, double q, double *out);

// Cuts the rectangle [a, b] x [c, d] from a lattice ("square",
// "triangular", "hexagonal" or "custom:<path>").
enum RcStatus rc_region_new(const char *lattice,
                            double a,
                            double b,
                            double c,
                            double d,
                            struct RcRegion **out);

// Builds a region from an explicit planar graph. Vertex `i` sits at
// `(xs[i], ys[i])`; edge `e` joins `us[e]` and `vs[e]`.
enum RcStatus rc_region_from_graph(size_t num_vertices,
                                   const double *xs,
                                   const double *ys,
                                   size_t num_edges,
                                   const size_t *us,
                                   const size_t *vs,
                                   struct RcRegion **out);

void rc_region_free(struct RcRegion *region);

// Number of vertices, or 0 for a null handle.
size_t rc_region_num_vertices(const struct RcRegion *region);

// Number of edges, or 0 for a null handle.
size_t rc_region_num_edges(const struct RcRegion *region);

// Endpoints of edge `edge`.
enum RcStatus rc_region_edge(const struct RcRegion *region, size_t edge, size_t *u, size_t *v);

// Homogeneous edge weight `p` in [0, 1] and cluster weight `q` > 0.
enum RcStatus rc_params_homogeneous(double p, double q, struct RcParams **out);

// Weighted mode: p_e = 1 - exp(-beta * J_e), one coupling per edge.
enum RcStatus rc_params_weighted(double beta,
                                 const double *couplings,
                                 size_t num_edges,
                                 double q,
                                 struct RcParams **out);

void rc_params_free(struct RcParams *params);

// Event from its JSON tree form.
enum RcStatus rc_event_from_json(const char *json, struct RcEvent **out);

enum RcStatus rc_event_edge_open(size_t edge, struct RcEvent **out);

enum RcStatus rc_event_connected(size_t u, size_t v, struct RcEvent **out);

enum RcStatus rc_event_crossing(enum RcDirection direction, struct RcEvent **out);

void rc_event_free(struct RcEvent *event);

// Partition function by exhaustive enumeration.
enum RcStatus rc_partition_function(const struct RcRegion *region,
                                    const struct RcParams *params,
                                    enum RcBoundary bc,
                                    double *out);

// Exact probability of an event.
enum RcStatus rc_probability(const struct RcRegion *region,
                             const struct RcParams *params,
                             enum RcBoundary bc,
                             const struct RcEvent *event,
                             double *out);

// Exact derivative of an event probability in the homogeneous weight p.
enum RcStatus rc_derivative_dp(const struct RcRegion *region,
                               const struct RcParams *params,
                               enum RcBoundary bc,
                               const struct RcEvent *event,
                               double *out);

// Largest edge influence on an increasing event.
enum RcStatus rc_max_influence(const struct RcRegion *region,
                               const struct RcParams *params,
                               enum RcBoundary bc,
                               const struct RcEvent *event,
                               size_t *out_edge,
                               double *out_value);

// Chain started from the all-closed configuration.
enum RcStatus rc_chain_new(const struct RcRegion *region,
                           const struct RcParams *params,
                           enum RcBoundary bc,
                           uint64_t seed,
                           struct RcChain **out);

void rc_chain_free(struct RcChain *chain);

// Performs `sweeps` sweeps with the chosen update rule.
enum RcStatus rc_chain_sweep(struct RcChain *chain, enum RcAlgorithm algorithm, uint64_t sweeps);

// Copies the current configuration into `buf`, one byte (0 or 1) per edge.
enum RcStatus rc_chain_configuration(const struct RcChain *chain, uint8_t *buf, size_t len);

// Coupled chain on (pi, omega) with pivot edge `pivot`.
enum RcStatus rc_coupling_new(const struct RcRegion *region,
                              const struct RcParams *params,
                              enum RcBoundary bc,
                              size_t pivot,
                              uint64_t seed,
                              struct RcCoupling **out);

void rc_coupling_free(struct RcCoupling *chain);

// Advances to the next transition. `out_done` is set to 1 when no
// transition is possible, in which case the other outputs are untouched.
enum RcStatus rc_coupling_step(struct RcCoupling *chain,
                               double *out_time,
                               size_t *out_edge,
                               enum RcTransitionKind *out_kind,
                               uint8_t *out_done);

// Checks the invariants on the current state. Each output is 1 when the
// invariant holds: pi <= omega edgewise, the pivot is closed in pi and open
// in omega, and the two agree off the pivot cluster of omega.
enum RcStatus rc_coupling_audit(const struct RcCoupling *chain,
                                uint8_t *monotone,
                                uint8_t *pivot,
                                uint8_t *off_cluster);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RCMODEL_H */
