/* Generated by cbindgen from the partial-balance-ffi crate. Do not edit. */

#ifndef PARTIAL_BALANCE_H
#define PARTIAL_BALANCE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PbAggregate {
  PB_AGGREGATE_SUM = 0,
  PB_AGGREGATE_LAST = 1,
  PB_AGGREGATE_MEAN = 2,
} PbAggregate;

typedef enum PbBalanceMode {
  PB_BALANCE_MODE_TYPE_MEAN = 0,
  PB_BALANCE_MODE_TRIAD_MEAN = 1,
} PbBalanceMode;

/**
 * Input formats accepted by [`pb_graph_from_file`].
 */
typedef enum PbFormat {
  PB_FORMAT_CSV_RATING = 0,
  PB_FORMAT_TSV_SIGN = 1,
  PB_FORMAT_SIGNED_MATRIX = 2,
} PbFormat;

typedef enum PbStatus {
  PB_STATUS_OK = 0,
  PB_STATUS_NULL_POINTER = 1,
  PB_STATUS_INVALID_UTF8 = 2,
  PB_STATUS_IO = 3,
  PB_STATUS_PARSE = 4,
  PB_STATUS_FORMAT = 5,
  PB_STATUS_NO_TRANSITIVE_TRIADS = 6,
  PB_STATUS_INVALID_ARGUMENT = 7,
  PB_STATUS_UNDEFINED = 8,
  PB_STATUS_PANIC = 9,
} PbStatus;

/**
 * A preprocessed graph and its undirected projection.
 */
typedef struct PbGraph PbGraph;

/**
 * Accumulated edge records.
 */
typedef struct PbRecords PbRecords;

/**
 * Balance figures of one graph.
 */
typedef struct PbReport PbReport;

/**
 * Preprocessing options. Enumerated fields hold `PbAggregate` values.
 */
typedef struct PbConfig {
  double sign_threshold;
  uint32_t aggregate;
  bool prune_pendants;
  /**
   * Keep every weak component instead of only the giant one.
   */
  bool keep_all_components;
} PbConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *pb_last_error_message(void);

/**
 * Default preprocessing: threshold 0, sum-then-sign, prune pendants, giant component.
 */
struct PbConfig pb_config_default(void);

struct PbRecords *pb_records_new(void);

/**
 * Append one weighted edge record.
 *
 * # Safety
 * `records` must come from [`pb_records_new`]; the strings must be
 * nul-terminated.
 */
enum PbStatus pb_records_push(struct PbRecords *records,
                              const char *source,
                              const char *target,
                              double weight);

/**
 * # Safety
 * `records` must be null or a live handle.
 */
size_t pb_records_len(const struct PbRecords *records);

/**
 * # Safety
 * `records` must come from [`pb_records_new`] and not be used afterwards.
 */
void pb_records_free(struct PbRecords *records);

/**
 * Aggregate, sign, and preprocess the records into a graph. A null `config`
 * selects the defaults.
 *
 * # Safety
 * `records` must be a live handle and `out` a writable pointer.
 */
enum PbStatus pb_graph_build(const struct PbRecords *records,
                             const struct PbConfig *config,
                             struct PbGraph **out);

/**
 * Load, aggregate, and preprocess a file. `format` is a `PbFormat` value.
 *
 * # Safety
 * `path` must be nul-terminated and `out` writable.
 */
enum PbStatus pb_graph_from_file(const char *path,
                                 uint32_t format,
                                 const struct PbConfig *config,
                                 struct PbGraph **out);

/**
 * # Safety
 * `graph` must be null or a live handle; the same holds for the other
 * graph accessors.
 */
size_t pb_graph_node_count(const struct PbGraph *graph);

/**
 * # Safety
 * As [`pb_graph_node_count`].
 */
size_t pb_graph_edge_count(const struct PbGraph *graph);

/**
 * # Safety
 * `graph` must come from a `pb_graph_*` constructor and not be used afterwards.
 */
void pb_graph_free(struct PbGraph *graph);

/**
 * Label of census class `index` (0..16, "003" through "300"), or null.
 */
const char *pb_triad_label(uint32_t index);

/**
 * Fill `counts[0..16]` with the triad census in label order.
 *
 * # Safety
 * `counts` must point to 16 writable `uint64_t`.
 */
enum PbStatus pb_census(const struct PbGraph *graph, uint64_t *counts);

/**
 * Directed balance figures. `mode` is a `PbBalanceMode` value selecting the
 * headline ratio.
 *
 * # Safety
 * `graph` must be live and `out` writable.
 */
enum PbStatus pb_balance_report(const struct PbGraph *graph, uint32_t mode, struct PbReport **out);

/**
 * Triangle balance of the undirected projection. `ratio` receives NaN when
 * there are no triangles. Any out pointer may be null.
 *
 * # Safety
 * `graph` must be live.
 */
enum PbStatus pb_undirected_balance(const struct PbGraph *graph,
                                    uint64_t *balanced,
                                    uint64_t *imbalanced,
                                    double *ratio);

/**
 * Headline ratio in the mode the report was built with; NaN for null.
 *
 * # Safety
 * `report` must be null or a live handle; the same holds for the other
 * report accessors.
 */
double pb_report_overall(const struct PbReport *report);

/**
 * # Safety
 * As [`pb_report_overall`].
 */
double pb_report_type_mean(const struct PbReport *report);

/**
 * # Safety
 * As [`pb_report_overall`].
 */
double pb_report_triad_mean(const struct PbReport *report);

/**
 * # Safety
 * As [`pb_report_overall`].
 */
double pb_report_nonpartial(const struct PbReport *report);

/**
 * # Safety
 * As [`pb_report_overall`].
 */
uint64_t pb_report_transitive_triads(const struct PbReport *report);

/**
 * Ratio and count for transitive slot 0..4 (030T, 120D, 120U, 300). The
 * ratio is NaN when no triad of that type exists.
 *
 * # Safety
 * `report` must be live; out pointers may be null.
 */
enum PbStatus pb_report_type(const struct PbReport *report,
                             uint32_t slot,
                             double *ratio,
                             uint64_t *count);

/**
 * Full report as a JSON string; free it with [`pb_string_free`]. Null on
 * failure.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *pb_report_to_json(const struct PbReport *report);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pb_string_free(char *s);

/**
 * # Safety
 * `report` must come from [`pb_balance_report`] and not be used afterwards.
 */
void pb_report_free(struct PbReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARTIAL_BALANCE_H */
