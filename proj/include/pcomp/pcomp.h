#ifndef PCOMP_PCOMP_H
#define PCOMP_PCOMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(PCOMP_BUILDING_LIBRARY)
#define PCOMP_API __attribute__((visibility("default")))
#else
#define PCOMP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcomp_status {
  PCOMP_OK = 0,
  PCOMP_ERR_CONFIG = 1,
  PCOMP_ERR_USAGE = 2,
  PCOMP_ERR_MODEL = 3,
  PCOMP_ERR_NUMERICAL = 4,
  PCOMP_ERR_PARSE = 5,
  PCOMP_ERR_IO = 6,
  PCOMP_ERR_INTERNAL = 7
} pcomp_status;

typedef enum pcomp_run_kind {
  PCOMP_RUN_CHECK = 0,
  PCOMP_RUN_EXTINCTION,
  PCOMP_RUN_EIGEN,
  PCOMP_RUN_COEXIST,
  PCOMP_RUN_SIMULATE,
  PCOMP_RUN_FRONT,
  PCOMP_RUN_SWEEP,
  PCOMP_RUN_SEGREGATE
} pcomp_run_kind;

typedef enum pcomp_segregate_kind {
  PCOMP_SEGREGATE_ETA = 0,
  PCOMP_SEGREGATE_GAMMA = 1,
  PCOMP_SEGREGATE_BOTH = 2
} pcomp_segregate_kind;

typedef struct pcomp_scenario pcomp_scenario;
typedef struct pcomp_result pcomp_result;

typedef struct pcomp_run_options {
  double k;       /* < 0 keeps the scenario value */
  double t_end;   /* <= 0 keeps the scenario value */
  int species;    /* species whose level set a front run tracks: 1 or 2 */
  int segregate;  /* pcomp_segregate_kind */
} pcomp_run_options;

PCOMP_API const char* pcomp_version(void);

/* Message of the last failed call on this thread; never NULL. */
PCOMP_API const char* pcomp_last_error(void);
/* Line and column of the last parse error on this thread, 0 otherwise. */
PCOMP_API size_t pcomp_last_error_line(void);
PCOMP_API size_t pcomp_last_error_column(void);

PCOMP_API void pcomp_run_options_init(pcomp_run_options* options);

PCOMP_API pcomp_status pcomp_scenario_default(pcomp_scenario** out);
PCOMP_API pcomp_status pcomp_scenario_parse(const char* text, pcomp_scenario** out);
PCOMP_API pcomp_status pcomp_scenario_load(const char* path, pcomp_scenario** out);
PCOMP_API void pcomp_scenario_free(pcomp_scenario* scenario);

/* Replaces one key, e.g. ("grid", "nodes", "512"), and revalidates. */
PCOMP_API pcomp_status pcomp_scenario_set(pcomp_scenario* scenario, const char* section,
                                          const char* key, const char* value);

/* Canonical text and its hash. The strings live until the scenario changes or is freed. */
PCOMP_API pcomp_status pcomp_scenario_dump(const pcomp_scenario* scenario, const char** text);
PCOMP_API pcomp_status pcomp_scenario_hash(const pcomp_scenario* scenario, const char** hash);
PCOMP_API pcomp_status pcomp_scenario_name(const pcomp_scenario* scenario, const char** name);

PCOMP_API pcomp_status pcomp_run(const pcomp_scenario* scenario, pcomp_run_kind kind,
                                 const pcomp_run_options* options, pcomp_result** out);
PCOMP_API void pcomp_result_free(pcomp_result* result);

/* 1 when the run finished without a conclusive answer (e.g. a rejected front). */
PCOMP_API int pcomp_result_inconclusive(const pcomp_result* result);
PCOMP_API const char* pcomp_result_report_json(const pcomp_result* result);
PCOMP_API size_t pcomp_result_table_count(const pcomp_result* result);
PCOMP_API const char* pcomp_result_table_name(const pcomp_result* result, size_t index);
/* CSV text whose first line references `manifest`. */
PCOMP_API pcomp_status pcomp_result_table_csv(pcomp_result* result, size_t index,
                                              const char* manifest, const char** csv);
PCOMP_API size_t pcomp_result_table_rows(const pcomp_result* result, size_t index);

#ifdef __cplusplus
}
#endif

#endif
