#ifndef GRAPHIC_GORENSTEIN_H
#define GRAPHIC_GORENSTEIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GgKind {
  GG_KIND_BASE = 0,
  GG_KIND_INDEP = 1,
} GgKind;

typedef enum GgStatus {
  GG_STATUS_OK = 0,
  GG_STATUS_PARSE_ERROR = 1,
  GG_STATUS_GUARD_EXCEEDED = 2,
  /**
   * The instance is not Gorenstein, so no certificate exists.
   */
  GG_STATUS_NOT_GORENSTEIN = 3,
  GG_STATUS_PRECONDITION = 4,
  GG_STATUS_NULL_ARGUMENT = 5,
  GG_STATUS_INVALID_UTF8 = 6,
  GG_STATUS_INTERNAL = 7,
} GgStatus;

/**
 * Opaque graph handle.
 */
typedef struct GgGraph GgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an edge list ("u v" or "u v m" per line, '#' comments).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum GgStatus gg_graph_parse(const char *text, struct GgGraph **out);

/**
 * Releases a graph; null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void gg_graph_free(struct GgGraph *g);

/**
 * Vertex count, or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t gg_graph_vertex_count(const struct GgGraph *g);

/**
 * Edge count (parallel edges counted), or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t gg_graph_edge_count(const struct GgGraph *g);

/**
 * The graph in edge-list format.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum GgStatus gg_graph_to_edge_list(const struct GgGraph *g, char **out);

/**
 * Combinatorial verdict. `delta_out` (may be null) receives `δ`, 0 when
 * every `δ` works, or -1 when not Gorenstein. `json_out` (may be null)
 * receives the full report.
 *
 * # Safety
 * `g` must be a live handle; output pointers must be null or valid.
 */
enum GgStatus gg_check(const struct GgGraph *g,
                       enum GgKind kind,
                       int32_t *delta_out,
                       char **json_out);

/**
 * Verdict from the lattice polytope. `node_guard` bounds lattice point
 * enumeration (0 picks the default); `hstar` non-zero adds the
 * h*-vector.
 *
 * # Safety
 * `g` must be a live handle and `json_out` a valid pointer.
 */
enum GgStatus gg_oracle(const struct GgGraph *g,
                        enum GgKind kind,
                        int32_t hstar,
                        uint64_t node_guard,
                        char **json_out);

/**
 * Certificates for a positive instance. For a negative one the report
 * (with its witness) is still written and the status is
 * `GG_STATUS_NOT_GORENSTEIN`.
 *
 * # Safety
 * `g` must be a live handle and `json_out` a valid pointer.
 */
enum GgStatus gg_certify(const struct GgGraph *g, enum GgKind kind, char **json_out);

/**
 * Replays a certificate given as JSON into a new graph.
 *
 * # Safety
 * `cert_json` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
enum GgStatus gg_replay(const char *cert_json, struct GgGraph **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gg_string_free(char *s);

/**
 * Message for the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *gg_last_error(void);

/**
 * Library version as a static string.
 */
const char *gg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHIC_GORENSTEIN_H */
