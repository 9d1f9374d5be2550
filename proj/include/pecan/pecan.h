/*
Copyright 2026 The PECAN Toolkit Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#ifndef PECAN_PECAN_H_
#define PECAN_PECAN_H_

/*
 * C interface of libpecan.
 *
 * Every fallible call returns a pecan_status. On failure the message is
 * available from pecan_last_error() on the same thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * pecan_string_free. Handles are released with their *_free function; the
 * free functions accept NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PECAN_BUILDING_DLL)
#define PECAN_API __declspec(dllexport)
#else
#define PECAN_API __declspec(dllimport)
#endif
#else
#define PECAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pecan_status {
  PECAN_OK = 0,
  PECAN_ERR_IO = 1,          /* file missing or unwritable */
  PECAN_ERR_PARSE = 2,       /* malformed document */
  PECAN_ERR_VALIDATION = 3,  /* inconsistent contents */
  PECAN_ERR_SHAPE = 4,       /* dimension mismatch */
  PECAN_ERR_VERSION = 5,     /* unsupported format version */
  PECAN_ERR_NUMERIC = 6,     /* NaN or Inf, e.g. a diverged training run */
  PECAN_ERR_DOMAIN = 7,      /* argument outside its domain */
  PECAN_ERR_CONFIG = 8,      /* invalid configuration */
  PECAN_ERR_SPEC = 9,        /* impossible dataset or experiment */
  PECAN_ERR_DEGENERATE = 10, /* evaluation has no meaningful answer */
  PECAN_ERR_ARGUMENT = 11,   /* NULL handle or pointer */
  PECAN_ERR_INTERNAL = 12
} pecan_status;

typedef struct pecan_dataset pecan_dataset;
typedef struct pecan_model pecan_model;
typedef struct pecan_service pecan_service;
typedef struct pecan_server pecan_server;

/* Library */
PECAN_API const char* pecan_version(void);
PECAN_API const char* pecan_status_name(pecan_status status);
PECAN_API const char* pecan_last_error(void);
PECAN_API void pecan_string_free(char* s);
/* "trace" .. "off". */
PECAN_API pecan_status pecan_set_log_level(const char* level);
/* PECAN_LOG when set, else fallback (NULL means "warn"). */
PECAN_API pecan_status pecan_init_logging(const char* fallback);

/* Datasets */
PECAN_API pecan_status pecan_dataset_generate(const char* spec_json, pecan_dataset** out);
PECAN_API pecan_status pecan_dataset_load(const char* path, pecan_dataset** out);
PECAN_API pecan_status pecan_dataset_from_json(const char* json, pecan_dataset** out);
PECAN_API pecan_status pecan_dataset_save(const pecan_dataset* dataset, const char* path);
PECAN_API pecan_status pecan_dataset_to_json(const pecan_dataset* dataset, char** out);
PECAN_API size_t pecan_dataset_size(const pecan_dataset* dataset);
PECAN_API size_t pecan_dataset_num_labels(const pecan_dataset* dataset);
/* Task-cluster separability of a dataset with ground truth, as JSON. */
PECAN_API pecan_status pecan_dataset_diagnose(const pecan_dataset* dataset, double separation, char** out_json);
PECAN_API void pecan_dataset_free(pecan_dataset* dataset);

/* Models. config_json holds the run settings (NULL or "{}" for defaults);
 * loss_history_json, when not NULL, receives one [trajectory, ce, total]
 * triple per epoch. */
PECAN_API pecan_status pecan_model_train(const pecan_dataset* dataset, const char* config_json, pecan_model** out,
                                         char** loss_history_json);
PECAN_API pecan_status pecan_model_load(const char* path, pecan_model** out);
PECAN_API pecan_status pecan_model_save(const pecan_model* model, const char* path);
PECAN_API pecan_status pecan_model_to_json(const pecan_model* model, char** out);
PECAN_API pecan_status pecan_model_info(const pecan_model* model, char** out_json);
PECAN_API size_t pecan_model_d_tau(const pecan_model* model);
PECAN_API size_t pecan_model_d_theta(const pecan_model* model);
/* EvalReport JSON; needs ground truth in eval_set. */
PECAN_API pecan_status pecan_model_evaluate(const pecan_model* model, const pecan_dataset* eval_set, char** out_json);
/* {"task": [...], "style": [[...], ...]} for every trajectory of the dataset. */
PECAN_API pecan_status pecan_model_encode(const pecan_model* model, const pecan_dataset* dataset, char** out_json);
/* Same body as the service's POST /decode response. */
PECAN_API pecan_status pecan_model_decode(const pecan_model* model, size_t task_id, const double* z, size_t z_len,
                                          char** out_json);
PECAN_API void pecan_model_free(pecan_model* model);

/* Experiments. cache_dir may be NULL. out_json receives
 * {"experiment", "summaries", "flags", "warnings", "runs_csv", "table"}. */
PECAN_API pecan_status pecan_experiment_run(const char* plan_json, const char* cache_dir, char** out_json);

/* Service. The service keeps its own copy of the model. */
PECAN_API pecan_status pecan_service_create(const pecan_model* model, pecan_service** out);
/* Routes one request; *status receives the HTTP status code. */
PECAN_API pecan_status pecan_service_handle(pecan_service* service, const char* method, const char* path,
                                            const char* body, int* status, char** out_body);
PECAN_API void pecan_service_free(pecan_service* service);

/* HTTP front end, serving on a background thread. port 0 picks a free port;
 * *bound_port receives the port in use. The service must outlive the server. */
PECAN_API pecan_status pecan_server_start(pecan_service* service, const char* host, int port, pecan_server** out,
                                          int* bound_port);
/* Blocks until the server stops. */
PECAN_API void pecan_server_wait(pecan_server* server);
PECAN_API void pecan_server_stop(pecan_server* server);
/* Stops if needed, then releases. */
PECAN_API void pecan_server_free(pecan_server* server);

#ifdef __cplusplus
}
#endif

#endif /* PECAN_PECAN_H_ */
