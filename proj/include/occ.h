/*
 * C interface to the conformal compression simulator.
 *
 * All entry points take a JSON run configuration (see README.md for the
 * schema), return an occ_status error code, and hand results back either as
 * files or as malloc'd JSON strings that the caller releases with
 * occ_string_free. A failing call leaves a human-readable message in the
 * calling thread's occ_last_error buffer.
 */
#ifndef OCC_H
#define OCC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum occ_status {
    OCC_OK = 0,
    OCC_INVALID_ARGUMENT = 1,
    OCC_PARSE_ERROR = 2,
    OCC_RUNTIME_ERROR = 3,
    OCC_IO_ERROR = 4
} occ_status;

const char* occ_version(void);
const char* occ_status_name(occ_status status);

/* Message for the most recent failure on this thread; never NULL. */
const char* occ_last_error(void);

void occ_string_free(char* s);

/* Opaque episode runner bound to one validated configuration. */
typedef struct occ_runner occ_runner;

occ_status occ_runner_create(const char* config_json, occ_runner** out);
void occ_runner_destroy(occ_runner* runner);

/*
 * Runs the configured episode. trace_path may be NULL to skip writing the
 * JSONL step trace. On success *summary_json receives the episode summary
 * (including guarantee verdicts).
 */
occ_status occ_runner_run(occ_runner* runner, const char* trace_path, char** summary_json);

/* One-shot helpers over the same configuration schema. */
occ_status occ_run_episode(const char* config_json, const char* trace_path, char** summary_json);
occ_status occ_sweep(const char* config_json, const char* csv_path, char** report_json);
occ_status occ_block_search(const char* config_json, char** result_json);
occ_status occ_verify_trace(const char* config_json, const char* trace_jsonl_path,
                            char** verdicts_json);
occ_status occ_generate_source(const char* config_json, const char* out_path, const char* format,
                               char** info_json);

#ifdef __cplusplus
}
#endif

#endif /* OCC_H */
