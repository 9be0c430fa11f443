#ifndef MRRD_H
#define MRRD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define MRRD_API __attribute__((visibility("default")))
#else
#define MRRD_API
#endif

/* Status codes; the numeric values double as process exit codes. */
typedef enum mrrd_status {
  MRRD_OK = 0,
  MRRD_ERR_INTERNAL = 1,
  MRRD_ERR_CONFIG = 2,
  MRRD_ERR_NUMERICAL = 3,
  MRRD_ERR_ARGUMENT = 4
} mrrd_status;

typedef struct mrrd_config mrrd_config;
typedef struct mrrd_result mrrd_result;
typedef struct mrrd_text mrrd_text;

/* Message of the last failing call on this thread, "" if none. */
MRRD_API const char* mrrd_last_error(void);
MRRD_API const char* mrrd_version(void);

/* Owned strings returned by the library. */
MRRD_API const char* mrrd_text_data(const mrrd_text* text);
MRRD_API void mrrd_text_free(mrrd_text* text);

/* Newline-separated scenario names. */
MRRD_API mrrd_status mrrd_preset_names(mrrd_text** out);

MRRD_API mrrd_status mrrd_config_preset(const char* name, mrrd_config** out);
MRRD_API mrrd_status mrrd_config_parse(const char* text, mrrd_config** out);
MRRD_API mrrd_status mrrd_config_load(const char* path, mrrd_config** out);
/* Sets one "key = value" entry; the config is validated by mrrd_config_check and mrrd_run. */
MRRD_API mrrd_status mrrd_config_set(mrrd_config* cfg, const char* key, const char* value);
MRRD_API mrrd_status mrrd_config_check(const mrrd_config* cfg);
MRRD_API mrrd_status mrrd_config_to_text(const mrrd_config* cfg, mrrd_text** out);
MRRD_API void mrrd_config_free(mrrd_config* cfg);

/* One metrics row; unavailable values are NaN. Index 0 is u, 1 is v. */
typedef struct mrrd_record {
  double t;
  double V;
  double eta;
  size_t leaves;
  int l_min;
  double e1[2];
  double e2[2];
  double einf[2];
  double R_mr;
  double R_fv;
  double wall_mr;
  double wall_fv;
} mrrd_record;

typedef void (*mrrd_progress_fn)(double t, double dt, size_t leaves, void* user);
typedef void (*mrrd_record_fn)(const mrrd_record* record, void* user);

typedef struct mrrd_callbacks {
  mrrd_progress_fn progress;
  mrrd_record_fn record;
  void* user;
} mrrd_callbacks;

/* Runs to t_final; paired != 0 advances a dense reference alongside.
   Callbacks may be NULL. On MRRD_ERR_NUMERICAL the last good state was written
   to the output directory. */
MRRD_API mrrd_status mrrd_run(const mrrd_config* cfg, int paired, const mrrd_callbacks* callbacks,
                              mrrd_result** out);
MRRD_API size_t mrrd_result_record_count(const mrrd_result* result);
MRRD_API mrrd_status mrrd_result_record(const mrrd_result* result, size_t index, mrrd_record* out);
MRRD_API double mrrd_result_epsilon(const mrrd_result* result);
MRRD_API long long mrrd_result_steps(const mrrd_result* result);
/* Human-readable summary and the per-species comparison table. */
MRRD_API mrrd_status mrrd_result_summary(const mrrd_result* result, mrrd_text** out);
MRRD_API mrrd_status mrrd_result_compare_table(const mrrd_result* result, mrrd_text** out);
MRRD_API void mrrd_result_free(mrrd_result* result);

/* Dense runs on levels lo..hi against reference_level; writes the report and order. */
MRRD_API mrrd_status mrrd_convergence(const mrrd_config* cfg, int lo, int hi, int reference_level,
                                      double* order, mrrd_text** report);

/* Leaf statistics of a snapshot (<stem>.leaves or the stem itself). */
MRRD_API mrrd_status mrrd_inspect(const char* path, double* eta, mrrd_text** report);

#ifdef __cplusplus
}
#endif

#endif
