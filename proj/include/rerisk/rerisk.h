/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the rerisk engine.
 *
 * Conventions:
 *  - Every fallible call returns a rerisk_status; RERISK_OK is 0.
 *  - On failure, rerisk_last_error() / rerisk_last_error_json() describe the
 *    error. Both are thread-local and valid until the next failing call on
 *    the same thread.
 *  - Strings returned through `char** out` are owned by the caller and must
 *    be released with rerisk_string_free().
 *  - Handles are opaque. A rerisk_engine is immutable after creation and may
 *    be shared by concurrent callers; a rerisk_server borrows its engine.
 */
#ifndef RERISK_RERISK_H
#define RERISK_RERISK_H

#include <stddef.h>

#if defined(_WIN32)
#define RERISK_API __declspec(dllexport)
#else
#define RERISK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rerisk_status {
  RERISK_OK = 0,
  RERISK_ERR_MALFORMED_INPUT = 1,
  RERISK_ERR_UNKNOWN_PHENOMENON = 2,
  RERISK_ERR_KIND_MISMATCH = 3,
  RERISK_ERR_DUPLICATE_RANK = 4,
  RERISK_ERR_RANK_OUT_OF_RANGE = 5,
  RERISK_ERR_DUPLICATE_ID = 6,
  RERISK_ERR_EMPTY_DATASET = 7,
  RERISK_ERR_CYCLE_DETECTED = 8,
  RERISK_ERR_INCONSISTENT_EVIDENCE = 9,
  RERISK_ERR_UNKNOWN_NODE = 10,
  RERISK_ERR_TOO_LARGE = 11,
  RERISK_ERR_INVALID_INPUTS = 12,
  RERISK_ERR_INVALID_THRESHOLDS = 13,
  RERISK_ERR_INVALID_ARGUMENT = 14,
  RERISK_ERR_IO = 15,
  RERISK_ERR_INTERNAL = 100
} rerisk_status;

typedef enum rerisk_format {
  RERISK_FORMAT_JSON = 0,
  RERISK_FORMAT_CSV = 1,
  RERISK_FORMAT_TEXT = 2,
  RERISK_FORMAT_DOT = 3
} rerisk_format;

typedef struct rerisk_dataset rerisk_dataset;
typedef struct rerisk_engine rerisk_engine;
typedef struct rerisk_server rerisk_server;

RERISK_API const char* rerisk_version(void);
RERISK_API const char* rerisk_status_name(rerisk_status status);
RERISK_API const char* rerisk_last_error(void);
/* {"error": {"code", "message", "field"?, "record_id"?, "suggestions"?}} */
RERISK_API const char* rerisk_last_error_json(void);
RERISK_API void rerisk_string_free(char* str);

/* Datasets. CSV input needs a catalog: JSON text (load) or a path (load_file). */
RERISK_API rerisk_status rerisk_dataset_load(const char* data, size_t size, rerisk_format format,
                                             const char* catalog_json, rerisk_dataset** out);
RERISK_API rerisk_status rerisk_dataset_load_file(const char* path, rerisk_format format,
                                                  const char* catalog_path, rerisk_dataset** out);
RERISK_API void rerisk_dataset_free(rerisk_dataset* dataset);
RERISK_API size_t rerisk_dataset_record_count(const rerisk_dataset* dataset);
RERISK_API size_t rerisk_dataset_phenomenon_count(const rerisk_dataset* dataset);
RERISK_API rerisk_status rerisk_dataset_hash(const rerisk_dataset* dataset, char** out);
/* format: JSON, CSV or TEXT. */
RERISK_API rerisk_status rerisk_dataset_summary(const rerisk_dataset* dataset, rerisk_format format,
                                                char** out);
/* format: JSON or CSV. */
RERISK_API rerisk_status rerisk_dataset_serialize(const rerisk_dataset* dataset,
                                                  rerisk_format format, char** out);
/* Cause-effect graph export; format: DOT or JSON. */
RERISK_API rerisk_status rerisk_dataset_graph(const rerisk_dataset* dataset,
                                              const char* const* highlight, size_t highlight_count,
                                              rerisk_format format, char** out);

/*
 * Engines. learn_config_json may be NULL for defaults, e.g.
 *   {"max_parents":4,"smoothing_alpha":1.0,"parameterization":"auto",
 *    "noisy_or_above":4,"include_context_nodes":true}
 * thresholds_json may be NULL for {"low_max":0.05,"high_min":0.20}.
 * cache_dir may be NULL or "" to always learn. The dataset is copied.
 */
RERISK_API rerisk_status rerisk_engine_create(const rerisk_dataset* dataset,
                                              const char* learn_config_json,
                                              const char* thresholds_json, const char* cache_dir,
                                              rerisk_engine** out);
RERISK_API void rerisk_engine_free(rerisk_engine* engine);
/* 1 when the network was read from the cache. */
RERISK_API int rerisk_engine_cache_hit(const rerisk_engine* engine);
RERISK_API rerisk_status rerisk_engine_net_json(const rerisk_engine* engine, char** out);
/* request_json: {"context":{...},"observed":[...],"thresholds":{...}}; NULL
 * or "" means an empty request. format: JSON, CSV or TEXT. */
RERISK_API rerisk_status rerisk_engine_assess(const rerisk_engine* engine, const char* request_json,
                                              rerisk_format format, char** out);
RERISK_API rerisk_status rerisk_engine_graph(const rerisk_engine* engine,
                                             const char* const* highlight, size_t highlight_count,
                                             rerisk_format format, char** out);
/* Routes one HTTP request (see README for the endpoint list). Always fills
 * *http_status and *out unless an argument is NULL. */
RERISK_API rerisk_status rerisk_engine_handle_http(const rerisk_engine* engine, const char* method,
                                                   const char* path, const char* query,
                                                   const char* body, int* http_status, char** out);

/* HTTP service. port 0 picks a free port; cors_origin may be NULL. */
RERISK_API rerisk_status rerisk_server_start(const rerisk_engine* engine, const char* bind_address,
                                             int port, const char* cors_origin,
                                             rerisk_server** out);
RERISK_API int rerisk_server_port(const rerisk_server* server);
/* Blocks until rerisk_server_stop is called from another thread. */
RERISK_API void rerisk_server_wait(rerisk_server* server);
RERISK_API void rerisk_server_stop(rerisk_server* server);
RERISK_API void rerisk_server_free(rerisk_server* server);

#ifdef __cplusplus
}
#endif

#endif /* RERISK_RERISK_H */
