#include <math.h>
#include <stdio.h>
#include <string.h>

#include "partial_balance.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(int argc, char **argv) {
  PbRecords *records = pb_records_new();
  /* mutual all-positive triangle plus a negative chord pair */
  const char *edges[][2] = {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}, {"a", "c"}, {"c", "a"}};
  for (int i = 0; i < 6; i++) {
    CHECK(pb_records_push(records, edges[i][0], edges[i][1], 1.0) == PB_STATUS_OK);
  }
  CHECK(pb_records_len(records) == 6);

  PbConfig cfg = pb_config_default();
  PbGraph *graph = NULL;
  CHECK(pb_graph_build(records, &cfg, &graph) == PB_STATUS_OK);
  pb_records_free(records);
  CHECK(pb_graph_node_count(graph) == 3);
  CHECK(pb_graph_edge_count(graph) == 6);

  uint64_t counts[16];
  CHECK(pb_census(graph, counts) == PB_STATUS_OK);
  CHECK(counts[15] == 1);
  CHECK(strcmp(pb_triad_label(15), "300") == 0);

  PbReport *report = NULL;
  CHECK(pb_balance_report(graph, PB_BALANCE_MODE_TRIAD_MEAN, &report) == PB_STATUS_OK);
  CHECK(pb_report_overall(report) == 1.0);
  CHECK(pb_report_transitive_triads(report) == 1);
  double ratio;
  uint64_t count;
  CHECK(pb_report_type(report, 0, &ratio, &count) == PB_STATUS_OK);
  CHECK(isnan(ratio) && count == 0);
  CHECK(pb_report_type(report, 9, &ratio, &count) == PB_STATUS_INVALID_ARGUMENT);
  CHECK(pb_last_error_message() != NULL);

  char *json = pb_report_to_json(report);
  CHECK(json != NULL && strstr(json, "\"overall_triad_mean\"") != NULL);
  pb_string_free(json);

  uint64_t bal, imb;
  CHECK(pb_undirected_balance(graph, &bal, &imb, &ratio) == PB_STATUS_OK);
  CHECK(bal == 1 && imb == 0 && ratio == 1.0);

  pb_report_free(report);
  pb_graph_free(graph);

  PbGraph *missing = NULL;
  CHECK(pb_graph_from_file("/no/such/file.tsv", PB_FORMAT_TSV_SIGN, NULL, &missing) == PB_STATUS_IO);
  CHECK(missing == NULL);
  CHECK(pb_census(NULL, counts) == PB_STATUS_NULL_POINTER);

  if (argc > 1) {
    PbGraph *g = NULL;
    CHECK(pb_graph_from_file(argv[1], PB_FORMAT_TSV_SIGN, NULL, &g) == PB_STATUS_OK);
    printf("%zu %zu\n", pb_graph_node_count(g), pb_graph_edge_count(g));
    pb_graph_free(g);
  }
  puts("ok");
  return 0;
}
