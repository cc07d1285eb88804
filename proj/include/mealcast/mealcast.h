/*
 * mealcast C API.
 *
 * Every function that can fail returns an mc_status. On failure a
 * description is available from mc_last_error() until the next failing call
 * on the same thread. Handles are opaque and owned by the caller; release
 * them with the matching *_free function (passing NULL is allowed).
 */
#ifndef MEALCAST_H_
#define MEALCAST_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define MC_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define MC_API __attribute__((visibility("default")))
#else
#  define MC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the CLI exit codes. */
typedef enum mc_status {
  MC_OK = 0,
  MC_ERR_VALIDATION = 1,
  MC_ERR_RUNTIME = 2
} mc_status;

typedef enum mc_row_metric {
  MC_ROW_METRIC_PLAIN = 0,
  MC_ROW_METRIC_SHIFTED = 1
} mc_row_metric;

#define MC_FEATURE_COUNT 8

typedef struct mc_dataset mc_dataset;
typedef struct mc_model mc_model;
typedef struct mc_outcome mc_outcome;

typedef struct mc_synth_profile {
  int64_t capacity;
  double holiday_rate;
  double noise_persons;
  size_t missing_defects;
  size_t outlier_defects;
} mc_synth_profile;

MC_API const char* mc_version(void);
MC_API const char* mc_last_error(void);
MC_API void mc_synth_profile_default(mc_synth_profile* profile);

/* Name of feature column `index` (0..7), or NULL when out of range. */
MC_API const char* mc_feature_name(size_t index);

/* ---- datasets ---- */
MC_API mc_status mc_dataset_load_csv(const char* path, mc_dataset** out);
MC_API mc_status mc_dataset_synthesize(size_t n, uint64_t seed, const mc_synth_profile* profile, mc_dataset** out);
MC_API mc_status mc_dataset_save_csv(const mc_dataset* ds, const char* path);
MC_API size_t mc_dataset_size(const mc_dataset* ds);
/* Label of `feature` in row `row`; NULL when out of range. */
MC_API const char* mc_dataset_label(const mc_dataset* ds, size_t row, size_t feature);
/* Demand of a row; returns MC_ERR_VALIDATION when the row has none. */
MC_API mc_status mc_dataset_demand(const mc_dataset* ds, size_t row, int64_t* demand);
MC_API void mc_dataset_free(mc_dataset* ds);

/* ---- models ---- */
MC_API mc_status mc_model_load(const char* path, mc_model** out);
MC_API mc_status mc_model_save(const mc_model* m, const char* path);
/* Writes the topology string (e.g. "8-10-10-1") into buf. *needed receives
 * the full length including the terminator; when cap is smaller nothing is
 * written and MC_ERR_VALIDATION is returned. */
MC_API mc_status mc_model_topology(const mc_model* m, char* buf, size_t cap, size_t* needed);
MC_API size_t mc_model_input_dim(const mc_model* m);
/* Raw network output for one normalized input vector. */
MC_API mc_status mc_model_forward(const mc_model* m, const double* x, size_t n, double* out, size_t out_cap);
/* Integer demand forecast from eight category labels in column order. */
MC_API mc_status mc_model_predict(const mc_model* m, const char* const labels[MC_FEATURE_COUNT], int64_t* demand);
MC_API void mc_model_free(mc_model* m);

/* ---- metrics (percentages for the MAPE family) ---- */
MC_API mc_status mc_metric_mape(const double* y, const double* yhat, size_t n, double* out);
MC_API mc_status mc_metric_mape_shifted(const double* y, const double* yhat, size_t n, double shift, double* out);
MC_API mc_status mc_metric_mse(const double* y, const double* yhat, size_t n, double* out);
MC_API mc_status mc_metric_r2(const double* y, const double* yhat, size_t n, double* out);
MC_API mc_status mc_metric_pearson(const double* y, const double* yhat, size_t n, double* out);

/* ---- batch commands ----
 * Each returns the exit code (0/1/2) and, when `outcome` is non-NULL, a
 * handle with the summary text and emitted artifact paths. `config_path`
 * may be NULL or empty for defaults; `seed` may be NULL to keep the
 * configured seed. */
MC_API int mc_cmd_synth(size_t n, uint64_t seed, const mc_synth_profile* profile, const char* out_path,
                        mc_outcome** outcome);
MC_API int mc_cmd_train(const char* data_path, const char* config_path, const char* model_out, const uint64_t* seed,
                        mc_outcome** outcome);
MC_API int mc_cmd_search(const char* data_path, const char* config_path, const char* results_out,
                         const uint64_t* seed, mc_outcome** outcome);
MC_API int mc_cmd_evaluate(const char* model_path, const char* data_path, const char* report_out, mc_row_metric mode,
                           mc_outcome** outcome);
MC_API int mc_cmd_predict(const char* model_path, const char* const labels[MC_FEATURE_COUNT], mc_outcome** outcome);

MC_API int mc_outcome_exit_code(const mc_outcome* o);
MC_API const char* mc_outcome_summary(const mc_outcome* o);
MC_API size_t mc_outcome_artifact_count(const mc_outcome* o);
MC_API const char* mc_outcome_artifact(const mc_outcome* o, size_t index);
MC_API void mc_outcome_free(mc_outcome* o);

#ifdef __cplusplus
}
#endif

#endif /* MEALCAST_H_ */
