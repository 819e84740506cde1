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

// Exercises the shared library through its C interface only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "impedans.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / (std::string("impedans_capi_") + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

impedans_config* small_config() {
  impedans_config* c = nullptr;
  REQUIRE(impedans_config_load(nullptr, nullptr, &c) == IMPEDANS_OK);
  REQUIRE(impedans_config_set(c, "/network/width", "12") == IMPEDANS_OK);
  REQUIRE(impedans_config_set(c, "/network/depth", "1") == IMPEDANS_OK);
  REQUIRE(impedans_config_set(c, "/domain/volume_points", "48") == IMPEDANS_OK);
  REQUIRE(impedans_config_set(c, "/evaluation/points", "100") == IMPEDANS_OK);
  REQUIRE(impedans_config_set(c, "/frequencies/list_hz", "[300, 700, 1100]") == IMPEDANS_OK);
  REQUIRE(impedans_config_set_epochs(c, 30) == IMPEDANS_OK);
  return c;
}

struct Stopper {
  int calls = 0;
  int stop_after = 0;
};

int on_progress(void* user, int, double, double) {
  auto* s = static_cast<Stopper*>(user);
  ++s->calls;
  return s->calls < s->stop_after ? 1 : 0;
}

}  // namespace

TEST_CASE("status names and null handling") {
  CHECK(std::string(impedans_version()) == "1.0.0");
  CHECK(std::string(impedans_status_name(IMPEDANS_ERROR_NUMERIC)) == "numeric error");
  CHECK(impedans_config_load(nullptr, nullptr, nullptr) == IMPEDANS_ERROR_ARGUMENT);
  CHECK(impedans_synth(nullptr, "x") == IMPEDANS_ERROR_ARGUMENT);
  CHECK(impedans_result_frequency_count(nullptr) == 0);
  impedans_config_free(nullptr);
  impedans_dataset_free(nullptr);
  impedans_result_free(nullptr);
  impedans_string_free(nullptr);
}

TEST_CASE("configuration errors map to validation status") {
  impedans_config* c = nullptr;
  CHECK(impedans_config_load(nullptr, "granite", &c) == IMPEDANS_ERROR_VALIDATION);
  CHECK(std::string(impedans_last_error()).find("preset") != std::string::npos);
  REQUIRE(impedans_config_load(nullptr, "near-rigid", &c) == IMPEDANS_OK);
  CHECK(impedans_config_set(c, "/network/nope", "1") == IMPEDANS_ERROR_VALIDATION);
  CHECK(impedans_config_set(c, "/network/width", "{") == IMPEDANS_ERROR_VALIDATION);
  CHECK(impedans_config_set_snr(c, "loud") == IMPEDANS_ERROR_VALIDATION);
  CHECK(impedans_config_set_snr(c, "inf") == IMPEDANS_OK);
  CHECK(impedans_config_set_epochs(c, -3) == IMPEDANS_ERROR_VALIDATION);
  char* text = nullptr;
  REQUIRE(impedans_config_to_json(c, &text) == IMPEDANS_OK);
  CHECK(std::string(text).find("near-rigid") != std::string::npos);
  impedans_string_free(text);
  impedans_config_free(c);
}

TEST_CASE("synth, infer, write, reload and eval") {
  const fs::path dir = scratch("pipeline");
  impedans_config* c = small_config();
  REQUIRE(impedans_config_set_seed(c, 9) == IMPEDANS_OK);
  REQUIRE(impedans_config_set_snr(c, "30") == IMPEDANS_OK);
  REQUIRE(impedans_synth(c, dir.c_str()) == IMPEDANS_OK);
  CHECK(fs::exists(dir / "dataset_clean.json"));

  impedans_dataset* d = nullptr;
  REQUIRE(impedans_dataset_load((dir / "dataset.json").c_str(), &d) == IMPEDANS_OK);
  CHECK(impedans_dataset_frequency_count(d) == 3);
  CHECK(impedans_dataset_sensor_count(d) == 32);
  REQUIRE(impedans_dataset_save(d, (dir / "copy.json").c_str()) == IMPEDANS_OK);
  CHECK(slurp(dir / "copy.json") == slurp(dir / "dataset.json"));

  impedans_result* r = nullptr;
  REQUIRE(impedans_infer(d, c, nullptr, nullptr, &r) == IMPEDANS_OK);
  CHECK(impedans_result_epochs(r) == 30);
  REQUIRE(impedans_result_frequency_count(r) == 3);
  double f = 0, re = 0, im = 0, a = -1;
  REQUIRE(impedans_result_spectrum(r, 2, &f, &re, &im, &a) == IMPEDANS_OK);
  CHECK(f == 1100.0);
  CHECK((a >= 0.0 && a <= 1.0));
  CHECK(impedans_result_spectrum(r, 3, &f, &re, &im, &a) == IMPEDANS_ERROR_ARGUMENT);
  REQUIRE(impedans_result_write(r, dir.c_str()) == IMPEDANS_OK);

  impedans_result* back = nullptr;
  REQUIRE(impedans_result_load((dir / "result.json").c_str(), &back) == IMPEDANS_OK);
  double re2 = 0, im2 = 0;
  REQUIRE(impedans_result_spectrum(back, 2, &f, &re2, &im2, &a) == IMPEDANS_OK);
  CHECK(re2 == re);
  CHECK(im2 == im);

  double mae_alpha = -1, mae_zeta = -1;
  REQUIRE(impedans_eval((dir / "result.json").c_str(), (dir / "dataset.json").c_str(),
                        (dir / "eval_field.json").c_str(), dir.c_str(), &mae_alpha, &mae_zeta) == IMPEDANS_OK);
  CHECK(mae_alpha >= 0.0);
  CHECK(mae_zeta >= 0.0);
  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(impedans_eval((dir / "missing.json").c_str(), (dir / "dataset.json").c_str(), nullptr, dir.c_str(), nullptr,
                      nullptr) != IMPEDANS_OK);

  impedans_result_free(back);
  impedans_result_free(r);
  impedans_dataset_free(d);
  impedans_config_free(c);
}

TEST_CASE("progress callback can stop training") {
  const fs::path dir = scratch("stop");
  impedans_config* c = small_config();
  REQUIRE(impedans_config_set(c, "/training/trace_period", "5") == IMPEDANS_OK);
  REQUIRE(impedans_synth(c, dir.c_str()) == IMPEDANS_OK);
  impedans_dataset* d = nullptr;
  REQUIRE(impedans_dataset_load((dir / "dataset.json").c_str(), &d) == IMPEDANS_OK);
  Stopper s;
  s.stop_after = 2;
  impedans_result* r = nullptr;
  REQUIRE(impedans_infer(d, c, on_progress, &s, &r) == IMPEDANS_OK);
  CHECK(impedans_result_epochs(r) == 6);
  CHECK(impedans_result_diagnostic_count(r) >= 1);
  CHECK(impedans_result_diagnostic(r, 999) == nullptr);
  impedans_result_free(r);
  impedans_dataset_free(d);
  impedans_config_free(c);
}

TEST_CASE("divergence reports numeric status") {
  const fs::path dir = scratch("diverge");
  impedans_config* c = small_config();
  REQUIRE(impedans_synth(c, dir.c_str()) == IMPEDANS_OK);
  REQUIRE(impedans_config_set(c, "/optimizer/lr", "1e200") == IMPEDANS_OK);
  impedans_dataset* d = nullptr;
  REQUIRE(impedans_dataset_load((dir / "dataset.json").c_str(), &d) == IMPEDANS_OK);
  impedans_result* r = nullptr;
  CHECK(impedans_infer(d, c, nullptr, nullptr, &r) == IMPEDANS_ERROR_NUMERIC);
  CHECK(r == nullptr);
  CHECK(std::string(impedans_last_error()).find("epoch") != std::string::npos);
  impedans_dataset_free(d);
  impedans_config_free(c);
}

TEST_CASE("unreadable dataset reports validation or io status") {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "broken.json") << "{\"schema_version\": 1";
  impedans_dataset* d = nullptr;
  CHECK(impedans_dataset_load((dir / "broken.json").c_str(), &d) == IMPEDANS_ERROR_VALIDATION);
  CHECK(impedans_dataset_load((dir / "absent.json").c_str(), &d) == IMPEDANS_ERROR_IO);
  CHECK(d == nullptr);
}
