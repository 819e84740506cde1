/* Copyright 2026 The impedans Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef IMPEDANS_H_
#define IMPEDANS_H_

/*
 * C interface of the impedance-inference library.
 *
 * Every function returns an impedans_status. On failure the message is
 * available from impedans_last_error() on the calling thread until the next
 * call into the library from that thread. Handles are opaque and owned by
 * the caller; release them with the matching *_free function. Strings
 * returned through char** must be released with impedans_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IMPEDANS_API __declspec(dllexport)
#else
#define IMPEDANS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum impedans_status {
  IMPEDANS_OK = 0,
  IMPEDANS_ERROR_VALIDATION = 1, /* malformed file, config or schema violation */
  IMPEDANS_ERROR_DOMAIN = 2,     /* input outside the valid range */
  IMPEDANS_ERROR_NUMERIC = 3,    /* non-finite values, divergence, poles */
  IMPEDANS_ERROR_IO = 4,
  IMPEDANS_ERROR_ARGUMENT = 5, /* null handle or index out of range */
  IMPEDANS_ERROR_INTERNAL = 6
} impedans_status;

typedef struct impedans_config impedans_config;
typedef struct impedans_dataset impedans_dataset;
typedef struct impedans_result impedans_result;

/* Called after every convergence-trace row; return 0 to stop training. */
typedef int (*impedans_progress_fn)(void* user, int epoch, double learning_rate, double total_loss);

IMPEDANS_API const char* impedans_version(void);
IMPEDANS_API const char* impedans_last_error(void);
IMPEDANS_API const char* impedans_status_name(impedans_status status);
IMPEDANS_API void impedans_string_free(char* s);

/* -- configuration ------------------------------------------------------ */

/* path may be NULL for defaults; preset may be NULL to keep the file's. */
IMPEDANS_API impedans_status impedans_config_load(const char* path, const char* preset, impedans_config** out);
IMPEDANS_API void impedans_config_free(impedans_config* config);

/* Sets the value at a JSON pointer, e.g. ("/noise/snr_db", "40"). */
IMPEDANS_API impedans_status impedans_config_set(impedans_config* config, const char* pointer,
                                                 const char* json_value);
/* Derives the network, noise, domain and evaluation seeds from one value. */
IMPEDANS_API impedans_status impedans_config_set_seed(impedans_config* config, uint64_t seed);
/* Fixed epoch budget. */
IMPEDANS_API impedans_status impedans_config_set_epochs(impedans_config* config, int epochs);
/* "inf" or a number in dB. */
IMPEDANS_API impedans_status impedans_config_set_snr(impedans_config* config, const char* snr_db);
IMPEDANS_API impedans_status impedans_config_to_json(const impedans_config* config, char** out);

/* -- datasets ----------------------------------------------------------- */

IMPEDANS_API impedans_status impedans_dataset_load(const char* path, impedans_dataset** out);
IMPEDANS_API impedans_status impedans_dataset_save(const impedans_dataset* dataset, const char* path);
IMPEDANS_API void impedans_dataset_free(impedans_dataset* dataset);
IMPEDANS_API size_t impedans_dataset_frequency_count(const impedans_dataset* dataset);
IMPEDANS_API size_t impedans_dataset_sensor_count(const impedans_dataset* dataset);

/* -- workflows ---------------------------------------------------------- */

/* Writes dataset.json, dataset_clean.json (when an snr is set) and
 * eval_field.json (when evaluation is enabled) into out_dir. */
IMPEDANS_API impedans_status impedans_synth(const impedans_config* config, const char* out_dir);

IMPEDANS_API impedans_status impedans_infer(const impedans_dataset* dataset, const impedans_config* config,
                                            impedans_progress_fn progress, void* user, impedans_result** out);

/* Writes result.json, zeta_spectrum.csv, alpha_spectrum.csv, convergence.csv
 * and weights.csv into out_dir. */
IMPEDANS_API impedans_status impedans_result_write(const impedans_result* result, const char* out_dir);
IMPEDANS_API impedans_status impedans_result_load(const char* path, impedans_result** out);
IMPEDANS_API void impedans_result_free(impedans_result* result);
IMPEDANS_API size_t impedans_result_frequency_count(const impedans_result* result);
IMPEDANS_API impedans_status impedans_result_spectrum(const impedans_result* result, size_t index, double* frequency_hz,
                                                      double* zeta_re, double* zeta_im, double* alpha);
IMPEDANS_API int impedans_result_epochs(const impedans_result* result);
IMPEDANS_API size_t impedans_result_diagnostic_count(const impedans_result* result);
IMPEDANS_API const char* impedans_result_diagnostic(const impedans_result* result, size_t index);

/* field_path may be NULL. Writes metrics.csv and eval_summary.json. The
 * summary metrics are returned through the optional out-pointers. */
IMPEDANS_API impedans_status impedans_eval(const char* result_path, const char* reference_path, const char* field_path,
                                           const char* out_dir, double* mae_alpha, double* mae_zeta);

/* Called after each finished sweep cell. */
typedef void (*impedans_sweep_fn)(void* user, const char* cell, const char* status, double mae_alpha,
                                  double mae_zeta);

/* Runs the configured grid into out_dir and writes sweep.csv. failed_cells
 * (optional) receives the number of cells that failed. */
IMPEDANS_API impedans_status impedans_sweep(const impedans_config* config, const char* out_dir,
                                            impedans_sweep_fn progress, void* user, size_t* failed_cells);

#ifdef __cplusplus
}
#endif

#endif /* IMPEDANS_H_ */
