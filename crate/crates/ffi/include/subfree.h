#ifndef SUBFREE_H
#define SUBFREE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SUBFREE_NONE SIZE_MAX




typedef enum SubfreeStatus {
  SUBFREE_STATUS_OK = 0,
  SUBFREE_STATUS_NULL_POINTER = 1,
  /**
   * A string argument is not UTF-8, or an array length is inconsistent.
   */
  SUBFREE_STATUS_INVALID_ARGUMENT = 2,
  SUBFREE_STATUS_PARSE_ERROR = 3,
  /**
   * Well-formed input that the library rejects (bad index, degenerate disks, ...).
   */
  SUBFREE_STATUS_INVALID_INPUT = 4,
  SUBFREE_STATUS_TOO_LARGE = 5,
  SUBFREE_STATUS_BUFFER_TOO_SMALL = 6,
  SUBFREE_STATUS_INTERNAL = 7,
  SUBFREE_STATUS_PANIC = 8,
} SubfreeStatus;

typedef struct SubfreeFamily SubfreeFamily;

typedef struct SubfreeGraph SubfreeGraph;

typedef struct SubfreeOutcome SubfreeOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next library call on the same thread.
 */
const char *subfree_last_error(void);

const char *subfree_version(void);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`2 * edge_count` entries).
 */
enum SubfreeStatus subfree_graph_new(size_t n,
                                     const size_t *edges,
                                     size_t edge_count,
                                     struct SubfreeGraph **out);

/**
 * Parses `{"n": ..., "edges": [[u, v], ...]}`.
 */
enum SubfreeStatus subfree_graph_from_json(const char *json, struct SubfreeGraph **out);

size_t subfree_graph_vertex_count(const struct SubfreeGraph *g);

size_t subfree_graph_edge_count(const struct SubfreeGraph *g);

void subfree_graph_free(struct SubfreeGraph *g);

/**
 * A family from `count` pattern graphs. The patterns are copied; the caller
 * keeps ownership of the handles.
 */
enum SubfreeStatus subfree_family_new(const struct SubfreeGraph *const *patterns,
                                      size_t count,
                                      struct SubfreeFamily **out);

/**
 * Parses a JSON list of graphs.
 */
enum SubfreeStatus subfree_family_from_json(const char *json, struct SubfreeFamily **out);

void subfree_family_free(struct SubfreeFamily *f);

/**
 * Decides whether deleting at most `k` edges makes `g` free of every
 * pattern in `fam`, using a BFS layering.
 */
enum SubfreeStatus subfree_solve(const struct SubfreeGraph *g,
                                 const struct SubfreeFamily *fam,
                                 size_t k,
                                 struct SubfreeOutcome **out);

/**
 * Like [`subfree_solve`] with a caller-supplied layering: `layers[v]` is the
 * 1-based layer of vertex `v`, one entry per vertex.
 */
enum SubfreeStatus subfree_solve_layered(const struct SubfreeGraph *g,
                                         const struct SubfreeFamily *fam,
                                         size_t k,
                                         const size_t *layers,
                                         struct SubfreeOutcome **out);

/**
 * Brute-force answer to the same question, for small inputs.
 */
enum SubfreeStatus subfree_solve_oracle(const struct SubfreeGraph *g,
                                        const struct SubfreeFamily *fam,
                                        size_t k,
                                        struct SubfreeOutcome **out);

bool subfree_outcome_is_yes(const struct SubfreeOutcome *o);

/**
 * Number of deleted edges, or `SUBFREE_NONE` for a "no" answer.
 */
size_t subfree_outcome_cost(const struct SubfreeOutcome *o);

/**
 * Copies the deleted edges into `edges` as flat pairs. `*count` receives
 * the number of edges; `SUBFREE_STATUS_BUFFER_TOO_SMALL` is returned when
 * `capacity` (in edges) is less than that, and nothing is written.
 */
enum SubfreeStatus subfree_outcome_witness(const struct SubfreeOutcome *o,
                                           size_t *edges,
                                           size_t capacity,
                                           size_t *count);

void subfree_outcome_free(struct SubfreeOutcome *o);

/**
 * Face count, ply and local radius of the arrangement of disks given as
 * JSON (`[{"x": "0", "y": "0", "r": "1"}, ...]`). An unbounded radius is
 * reported as `SUBFREE_NONE`.
 */
enum SubfreeStatus subfree_arrangement_stats(const char *disks_json,
                                             size_t *faces,
                                             size_t *ply,
                                             size_t *local_radius);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBFREE_H */
