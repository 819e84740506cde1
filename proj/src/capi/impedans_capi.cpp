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

#include "impedans.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "error.hpp"
#include "workflows.hpp"

struct impedans_config {
  impedans::io::RunConfig config;
};

struct impedans_dataset {
  impedans::field::PressureDataset dataset;
  std::string path;
};

struct impedans_result {
  impedans::io::ResultBundle bundle;
};

namespace {

thread_local std::string last_error;

impedans_status fail(impedans_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs f and maps the core's exception hierarchy onto status codes.
template <class F>
impedans_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return IMPEDANS_OK;
  } catch (const impedans::ValidationError& e) {
    return fail(IMPEDANS_ERROR_VALIDATION, e.what());
  } catch (const impedans::DomainError& e) {
    return fail(IMPEDANS_ERROR_DOMAIN, e.what());
  } catch (const impedans::NumericError& e) {
    return fail(IMPEDANS_ERROR_NUMERIC, e.what());
  } catch (const impedans::IoError& e) {
    return fail(IMPEDANS_ERROR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(IMPEDANS_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(IMPEDANS_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(IMPEDANS_ERROR_INTERNAL, "unknown error");
  }
}

#define IMPEDANS_REQUIRE(ptr)                                                  \
  do {                                                                         \
    if (!(ptr)) return fail(IMPEDANS_ERROR_ARGUMENT, #ptr " must not be null"); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* impedans_version(void) { return "1.0.0"; }

const char* impedans_last_error(void) { return last_error.c_str(); }

const char* impedans_status_name(impedans_status status) {
  switch (status) {
    case IMPEDANS_OK: return "ok";
    case IMPEDANS_ERROR_VALIDATION: return "validation error";
    case IMPEDANS_ERROR_DOMAIN: return "domain error";
    case IMPEDANS_ERROR_NUMERIC: return "numeric error";
    case IMPEDANS_ERROR_IO: return "i/o error";
    case IMPEDANS_ERROR_ARGUMENT: return "invalid argument";
    case IMPEDANS_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void impedans_string_free(char* s) { std::free(s); }

impedans_status impedans_config_load(const char* path, const char* preset, impedans_config** out) {
  IMPEDANS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const std::string p = preset ? preset : "";
    auto handle = std::make_unique<impedans_config>();
    handle->config = path ? impedans::io::load_run_config(path, p)
                          : impedans::io::run_config_from_json(impedans::io::json::object(), p);
    *out = handle.release();
  });
}

void impedans_config_free(impedans_config* config) { delete config; }

impedans_status impedans_config_set(impedans_config* config, const char* pointer, const char* json_value) {
  IMPEDANS_REQUIRE(config);
  IMPEDANS_REQUIRE(pointer);
  IMPEDANS_REQUIRE(json_value);
  return guarded([&] { impedans::io::apply_override(config->config, pointer, json_value); });
}

impedans_status impedans_config_set_seed(impedans_config* config, uint64_t seed) {
  IMPEDANS_REQUIRE(config);
  return guarded([&] { impedans::io::set_seed(config->config, seed); });
}

impedans_status impedans_config_set_epochs(impedans_config* config, int epochs) {
  IMPEDANS_REQUIRE(config);
  return guarded([&] {
    impedans::io::RunConfig c = config->config;
    c.budget.mode = "fixed";
    c.budget.epochs = epochs;
    c.validate();
    config->config = c;
  });
}

impedans_status impedans_config_set_snr(impedans_config* config, const char* snr_db) {
  IMPEDANS_REQUIRE(config);
  IMPEDANS_REQUIRE(snr_db);
  return guarded([&] {
    const std::string s = snr_db;
    if (s == "inf" || s == "+inf") {
      impedans::io::apply_override(config->config, "/noise/snr_db", "\"inf\"");
      return;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw impedans::ValidationError(fmt::format("--snr: not a number: '{}'", s));
    impedans::io::RunConfig c = config->config;
    c.noise.snr_db = v;
    c.validate();
    config->config = c;
  });
}

impedans_status impedans_config_to_json(const impedans_config* config, char** out) {
  IMPEDANS_REQUIRE(config);
  IMPEDANS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = copy_string(impedans::io::dump(impedans::io::run_config_to_json(config->config))); });
}

impedans_status impedans_dataset_load(const char* path, impedans_dataset** out) {
  IMPEDANS_REQUIRE(path);
  IMPEDANS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<impedans_dataset>();
    handle->dataset = impedans::io::load_dataset(path);
    handle->path = path;
    *out = handle.release();
  });
}

impedans_status impedans_dataset_save(const impedans_dataset* dataset, const char* path) {
  IMPEDANS_REQUIRE(dataset);
  IMPEDANS_REQUIRE(path);
  return guarded([&] { impedans::io::save_dataset(path, dataset->dataset); });
}

void impedans_dataset_free(impedans_dataset* dataset) { delete dataset; }

size_t impedans_dataset_frequency_count(const impedans_dataset* dataset) {
  return dataset ? dataset->dataset.frequencies.size() : 0;
}

size_t impedans_dataset_sensor_count(const impedans_dataset* dataset) {
  return dataset ? dataset->dataset.sensors.size() : 0;
}

impedans_status impedans_synth(const impedans_config* config, const char* out_dir) {
  IMPEDANS_REQUIRE(config);
  IMPEDANS_REQUIRE(out_dir);
  return guarded([&] { impedans::io::cmd_synth(config->config, out_dir); });
}

impedans_status impedans_infer(const impedans_dataset* dataset, const impedans_config* config,
                               impedans_progress_fn progress, void* user, impedans_result** out) {
  IMPEDANS_REQUIRE(dataset);
  IMPEDANS_REQUIRE(config);
  IMPEDANS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    impedans::train::ProgressCallback cb;
    if (progress) {
      cb = [progress, user](const impedans::train::TraceRow& row) {
        return progress(user, row.epoch, row.lr, row.total) != 0;
      };
    }
    auto handle = std::make_unique<impedans_result>();
    handle->bundle = impedans::io::infer(dataset->dataset, config->config, cb, dataset->path);
    *out = handle.release();
  });
}

impedans_status impedans_result_write(const impedans_result* result, const char* out_dir) {
  IMPEDANS_REQUIRE(result);
  IMPEDANS_REQUIRE(out_dir);
  return guarded([&] { impedans::io::write_result_bundle(result->bundle, out_dir); });
}

impedans_status impedans_result_load(const char* path, impedans_result** out) {
  IMPEDANS_REQUIRE(path);
  IMPEDANS_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<impedans_result>();
    handle->bundle = impedans::io::load_result(path);
    *out = handle.release();
  });
}

void impedans_result_free(impedans_result* result) { delete result; }

size_t impedans_result_frequency_count(const impedans_result* result) {
  return result ? result->bundle.result.spectrum.frequencies.size() : 0;
}

impedans_status impedans_result_spectrum(const impedans_result* result, size_t index, double* frequency_hz,
                                         double* zeta_re, double* zeta_im, double* alpha) {
  IMPEDANS_REQUIRE(result);
  const auto& s = result->bundle.result.spectrum;
  if (index >= s.frequencies.size()) {
    return fail(IMPEDANS_ERROR_ARGUMENT, fmt::format("index {} out of range ({} frequencies)", index,
                                                     s.frequencies.size()));
  }
  if (frequency_hz) *frequency_hz = s.frequencies[index];
  if (zeta_re) *zeta_re = s.zeta[index].real();
  if (zeta_im) *zeta_im = s.zeta[index].imag();
  if (alpha) *alpha = s.alpha[index];
  return IMPEDANS_OK;
}

int impedans_result_epochs(const impedans_result* result) { return result ? result->bundle.result.epochs : 0; }

size_t impedans_result_diagnostic_count(const impedans_result* result) {
  return result ? result->bundle.result.diagnostics.size() : 0;
}

const char* impedans_result_diagnostic(const impedans_result* result, size_t index) {
  if (!result || index >= result->bundle.result.diagnostics.size()) return nullptr;
  return result->bundle.result.diagnostics[index].c_str();
}

impedans_status impedans_eval(const char* result_path, const char* reference_path, const char* field_path,
                              const char* out_dir, double* mae_alpha, double* mae_zeta) {
  IMPEDANS_REQUIRE(result_path);
  IMPEDANS_REQUIRE(reference_path);
  IMPEDANS_REQUIRE(out_dir);
  return guarded([&] {
    std::optional<std::filesystem::path> field;
    if (field_path) field = field_path;
    const auto rep = impedans::io::cmd_eval(result_path, reference_path, field, out_dir);
    if (mae_alpha) *mae_alpha = rep.mae_alpha;
    if (mae_zeta) *mae_zeta = rep.mae_zeta;
  });
}

impedans_status impedans_sweep(const impedans_config* config, const char* out_dir, impedans_sweep_fn progress,
                               void* user, size_t* failed_cells) {
  IMPEDANS_REQUIRE(config);
  IMPEDANS_REQUIRE(out_dir);
  return guarded([&] {
    impedans::io::SweepProgress cb;
    if (progress) {
      cb = [progress, user](const impedans::io::SweepRow& row) {
        progress(user, row.cell.name.c_str(), row.status.c_str(), row.mae_alpha, row.mae_zeta);
      };
    }
    const auto rows = impedans::io::cmd_sweep(config->config, out_dir, cb);
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.status.rfind("failed", 0) == 0 ? 1 : 0;
    if (failed_cells) *failed_cells = failed;
  });
}

}  // extern "C"
