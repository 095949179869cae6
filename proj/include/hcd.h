/* C API for the hierarchical network change detector. All functions return
 * hcd_status; results come back through opaque handles that must be
 * released with the matching *_free call. hcd_last_error() returns a
 * thread-local message for the most recent failure on this thread. */

#ifndef HCD_H
#define HCD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HCD_API __declspec(dllexport)
#else
#define HCD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hcd_status {
    HCD_OK = 0,
    HCD_ERR_INVALID_ARGUMENT = 1,
    HCD_ERR_IO = 2,
    HCD_ERR_PARSE = 3,
    HCD_ERR_INTERNAL = 4
} hcd_status;

HCD_API const char* hcd_status_name(hcd_status status);
HCD_API const char* hcd_last_error(void);

typedef struct hcd_stream hcd_stream;
typedef struct hcd_result hcd_result;
typedef struct hcd_table hcd_table;

typedef enum hcd_window_mode { HCD_WINDOW_POOLED = 0, HCD_WINDOW_PER_SNAPSHOT = 1 } hcd_window_mode;

typedef struct hcd_config {
    int h;
    double delta;
    double delta_xz;
    double delta_z;
    int k_max;
    int restarts;
    uint64_t seed;
    int window_mode; /* hcd_window_mode */
} hcd_config;

HCD_API hcd_status hcd_config_default(hcd_config* config);

/* ---- snapshot streams ---- */

HCD_API hcd_status hcd_stream_load(const char* path, hcd_stream** out);
HCD_API hcd_status hcd_stream_save(const hcd_stream* stream, const char* path);

/* scenario is "abrupt" or "gradual"; the handle carries the ground truth */
HCD_API hcd_status hcd_stream_generate(const char* scenario, int n_nodes, uint64_t seed,
                                       hcd_stream** out);
HCD_API hcd_status hcd_stream_save_annotations(const hcd_stream* stream, const char* path);

HCD_API size_t hcd_stream_length(const hcd_stream* stream);
HCD_API int hcd_stream_node_count(const hcd_stream* stream);
HCD_API void hcd_stream_free(hcd_stream* stream);

/* ---- detection ---- */

typedef struct hcd_report_row {
    int t;
    double phi, phi_xz, phi_z, delta_l;
    double eps, eps_xz, eps_z;
    int k_hat, k_hat1, k_hat2;
    int alarm_level3, alarm_level2, alarm_level1;
    int has_weights;
    double w_xz, w_z;
} hcd_report_row;

HCD_API hcd_status hcd_detect(const hcd_stream* stream, const hcd_config* config,
                              hcd_result** out);
HCD_API size_t hcd_result_size(const hcd_result* result);
HCD_API hcd_status hcd_result_row(const hcd_result* result, size_t index, hcd_report_row* row);
HCD_API hcd_status hcd_result_write_csv(const hcd_result* result, const char* path);
HCD_API hcd_status hcd_result_write_json(const hcd_result* result, const hcd_config* config,
                                         const char* input_path, const char* path);
HCD_API void hcd_result_free(hcd_result* result);

/* ---- experiments ---- */

typedef void (*hcd_progress_fn)(int trial, int n_trials, void* user);

HCD_API hcd_status hcd_experiment_run(const char* scenario, int n_trials, const int* h_values,
                                      size_t n_h, int n_nodes, const hcd_config* config,
                                      hcd_progress_fn progress, void* user, hcd_table** out);

typedef struct hcd_table_row {
    const char* method;
    int h;
    int level;
    double benefit_mean, benefit_std;
    double far_mean, far_std;
    double threshold;
} hcd_table_row;

HCD_API size_t hcd_table_size(const hcd_table* table);
HCD_API hcd_status hcd_table_row_at(const hcd_table* table, size_t index, hcd_table_row* row);
HCD_API hcd_status hcd_table_write_csv(const hcd_table* table, const char* path);
HCD_API hcd_status hcd_table_write_json(const hcd_table* table, const char* path);
HCD_API void hcd_table_free(hcd_table* table);

#ifdef __cplusplus
}
#endif

#endif /* HCD_H */
