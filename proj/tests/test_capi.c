#include <stdio.h>
#include <string.h>

#include "pcomp/pcomp.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

int main(void) {
  pcomp_scenario* s = NULL;
  pcomp_result* r = NULL;
  const char* text = NULL;
  const char* hash = NULL;
  const char* csv = NULL;
  pcomp_run_options opts;

  EXPECT(strcmp(pcomp_version(), "") != 0);
  EXPECT(pcomp_scenario_default(&s) == PCOMP_OK);
  EXPECT(pcomp_scenario_dump(s, &text) == PCOMP_OK && strstr(text, "[model]") != NULL);
  EXPECT(pcomp_scenario_hash(s, &hash) == PCOMP_OK && strlen(hash) == 16);

  EXPECT(pcomp_scenario_set(s, "grid", "nodes", "64") == PCOMP_OK);
  EXPECT(pcomp_scenario_set(s, "grid", "bogus", "1") == PCOMP_ERR_PARSE);
  EXPECT(strstr(pcomp_last_error(), "bogus") != NULL);

  pcomp_run_options_init(&opts);
  EXPECT(pcomp_run(s, PCOMP_RUN_EXTINCTION, &opts, &r) == PCOMP_OK);
  EXPECT(pcomp_result_inconclusive(r) == 0);
  EXPECT(strstr(pcomp_result_report_json(r), "\"residual1\"") != NULL);
  EXPECT(pcomp_result_table_count(r) == 1);
  EXPECT(strcmp(pcomp_result_table_name(r, 0), "extinction") == 0);
  EXPECT(pcomp_result_table_rows(r, 0) == 64);
  EXPECT(pcomp_result_table_csv(r, 0, "manifest.json", &csv) == PCOMP_OK);
  EXPECT(strncmp(csv, "# manifest: manifest.json\nx [length],", 37) == 0);
  EXPECT(pcomp_result_table_csv(r, 5, "m", &csv) == PCOMP_ERR_USAGE);
  EXPECT(pcomp_result_table_name(r, 5) == NULL);
  pcomp_result_free(r);

  r = NULL;
  opts.species = 3;
  EXPECT(pcomp_run(s, PCOMP_RUN_FRONT, &opts, &r) == PCOMP_ERR_USAGE);
  EXPECT(r == NULL);
  EXPECT(pcomp_run(s, (pcomp_run_kind)42, NULL, &r) == PCOMP_ERR_USAGE);
  pcomp_scenario_free(s);

  s = NULL;
  EXPECT(pcomp_scenario_parse("[model]\nk = 2\n  what = 1\n", &s) == PCOMP_ERR_PARSE);
  EXPECT(s == NULL);
  EXPECT(pcomp_last_error_line() == 3);
  EXPECT(pcomp_last_error_column() == 3);
  EXPECT(pcomp_scenario_parse("[model]\nnu2 = -1\n", &s) == PCOMP_ERR_MODEL);
  EXPECT(strstr(pcomp_last_error(), "H3") != NULL);
  EXPECT(pcomp_scenario_load("/nonexistent/pcomp.ini", &s) == PCOMP_ERR_IO);
  EXPECT(pcomp_scenario_default(NULL) == PCOMP_ERR_USAGE);
  pcomp_scenario_free(NULL);
  pcomp_result_free(NULL);

  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
