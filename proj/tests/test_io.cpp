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

#include <filesystem>

#include "doctest.h"
#include "error.hpp"
#include "workflows.hpp"

using namespace impedans;
using namespace impedans::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("impedans_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig tiny_config(const std::string& preset = "constant") {
  RunConfig c = preset_config(preset);
  c.network.width = 8;
  c.network.depth = 2;
  c.domain.volume_points = 32;
  c.domain.boundary_grid = 4;
  c.array.nx = 3;
  c.array.ny = 3;
  c.frequencies.list_hz = {500.0, 700.0, 900.0};
  c.budget.mode = "fixed";
  c.budget.epochs = 12;
  c.loss.update_period = 5;
  c.training.trace_period = 5;
  c.evaluation.points = 40;
  return c;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config defaults and presets") {
  const RunConfig c = run_config_from_json(json::object());
  CHECK(c.preset == "porous");
  const auto f = frequency_grid(c);
  REQUIRE(f.size() == 200);
  CHECK(f.front() == 80.0);
  CHECK(f.back() == doctest::Approx(2820.0).epsilon(1e-15));
  CHECK(c.material.kind == "porous");
  CHECK(c.material.sigma == 39260.0);
  CHECK(c.array.nx == 4);
  CHECK(c.network.omega0 == 1.0);

  const RunConfig r = run_config_from_json(json{{"preset", "near-rigid"}});
  CHECK(frequency_grid(r).back() == doctest::Approx(1420.0).epsilon(1e-15));
  CHECK(frequency_grid(r).front() == 80.0);
  CHECK(material_spec(r).impedance(500.0) == Complex(39.0, 0.0));

  // file values win over the preset, and the preset argument over the file
  const RunConfig o = run_config_from_json(json{{"preset", "near-rigid"}, {"frequencies", {{"max_hz", 1000.0}}}});
  CHECK(frequency_grid(o).back() == doctest::Approx(1000.0));
  CHECK(run_config_from_json(json{{"preset", "near-rigid"}}, "porous").material.kind == "porous");
  CHECK_THROWS_AS(run_config_from_json(json{{"preset", "foam"}}), ValidationError);
}

TEST_CASE("config rejects unknown keys and bad values with their location") {
  const std::string unknown = error_of([] { run_config_from_json(json{{"network", {{"widht", 3}}}}); });
  CHECK(unknown.find("/network/widht") != std::string::npos);
  const std::string top = error_of([] { run_config_from_json(json{{"netwrk", json::object()}}); });
  CHECK(top.find("/netwrk") != std::string::npos);
  const std::string type = error_of([] { run_config_from_json(json{{"array", {{"nx", "four"}}}}); });
  CHECK(type.find("/array/nx") != std::string::npos);
  const std::string wave = error_of([] {
    run_config_from_json(json{{"source", {{"kind", "waves"}, {"waves", {{{"theta_deg", 10.0}, {"phase", 1.0}}}}}}});
  });
  CHECK(wave.find("/source/waves/0/phase") != std::string::npos);
  const std::string range = error_of([] { run_config_from_json(json{{"array", {{"d1", -0.01}}}}); });
  CHECK(range.find("/array") != std::string::npos);
  CHECK_THROWS_AS(run_config_from_json(json{{"optimizer", {{"kind", "sgd"}}}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json(json{{"loss", {{"alpha_data", 1.5}}}}), ValidationError);
  CHECK_THROWS_AS(run_config_from_json(json{{"budget", {{"mode", "sometimes"}}}}), ValidationError);
}

TEST_CASE("config echo round trip and overrides") {
  RunConfig c = tiny_config();
  c.loss.alpha_smooth = 0.75;
  c.noise.snr_db = std::numeric_limits<double>::infinity();
  c.source.kind = "waves";
  c.source.waves = {{10.0, 20.0, {1.0, 0.5}}, {40.0, -30.0, {0.0, 2.0}}};
  const json j = run_config_to_json(c);
  CHECK(j.at("noise").at("snr_db") == "inf");
  const RunConfig back = run_config_from_json(j);
  CHECK(dump(run_config_to_json(back)) == dump(j));
  CHECK(back.source.waves[1].amplitude == Complex(0.0, 2.0));

  apply_override(c, "/noise/snr_db", "40");
  CHECK(c.noise.snr_db == 40.0);
  apply_override(c, "/budget/epochs", "0");
  CHECK(c.budget.epochs == 0);
  CHECK_THROWS_AS(apply_override(c, "/noise/snr", "40"), ValidationError);
  CHECK_THROWS_AS(apply_override(c, "/budget/epochs", "zero"), ValidationError);
  set_seed(c, 10);
  CHECK(c.seeds.network == 10);
  CHECK(c.seeds.evaluation == 13);
}

TEST_CASE("synth writes the configured dataset") {
  TempDir dir("synth");
  RunConfig c = preset_config("porous");
  c.evaluation.points = 50;
  const SynthFiles files = cmd_synth(c, dir.path);
  const field::PressureDataset d = load_dataset(files.dataset);
  CHECK(d.sensors.size() == 32);
  CHECK(d.frequencies.size() == 200);
  CHECK(d.frequencies.front() == 80.0);
  CHECK(d.frequencies.back() == doctest::Approx(2820.0));
  CHECK_FALSE(files.clean.has_value());
  REQUIRE(files.evaluation.has_value());
  CHECK(load_evaluation_set(*files.evaluation).points.size() == 50);

  SUBCASE("dataset round trip is byte-identical") {
    const std::string first = read_file(files.dataset);
    save_dataset(dir.path / "again.json", load_dataset(files.dataset));
    CHECK(read_file(dir.path / "again.json") == first);
  }
  SUBCASE("infinite snr writes byte-identical clean and noisy files") {
    c.noise.snr_db = std::numeric_limits<double>::infinity();
    const SynthFiles f = cmd_synth(c, dir.path / "inf");
    REQUIRE(f.clean.has_value());
    CHECK(read_file(f.dataset) == read_file(*f.clean));
  }
  SUBCASE("finite snr writes a noisy file and its clean twin") {
    c.noise.snr_db = 30.0;
    const SynthFiles f = cmd_synth(c, dir.path / "snr");
    const field::PressureDataset noisy = load_dataset(f.dataset);
    const field::PressureDataset clean = load_dataset(*f.clean);
    REQUIRE(noisy.noise.has_value());
    CHECK(noisy.noise->snr_db == 30.0);
    CHECK(noisy.pressure != clean.pressure);
    CHECK(clean.pressure == d.pressure);
    save_dataset(dir.path / "noisy_again.json", noisy);
    CHECK(read_file(dir.path / "noisy_again.json") == read_file(f.dataset));
  }
  SUBCASE("no temporary files are left behind") {
    for (const auto& e : fs::directory_iterator(dir.path)) {
      CHECK(e.path().string().find(".tmp.") == std::string::npos);
    }
  }
}

TEST_CASE("dataset schema violations name the JSON path") {
  TempDir dir("schema");
  RunConfig c = tiny_config();
  c.evaluation.enabled = false;
  const SynthFiles files = cmd_synth(c, dir.path);
  const json good = load_json(files.dataset);
  auto message = [&](const std::function<void(json&)>& mutate) {
    json j = good;
    mutate(j);
    return error_of([&] { dataset_from_json(j); });
  };
  CHECK(message([](json& j) { j["geometry"]["foo"] = 1; }).find("/geometry/foo") != std::string::npos);
  CHECK(message([](json& j) { j["pressure"][1][2] = "x"; }).find("/pressure/1/2") != std::string::npos);
  CHECK(message([](json& j) { j.erase("frequencies_hz"); }).find("/frequencies_hz") != std::string::npos);
  CHECK(message([](json& j) { j["schema_version"] = 7; }).find("/schema_version") != std::string::npos);
  CHECK(message([](json& j) { j["sensors"].erase(0); }).find("/sensors") != std::string::npos);
  CHECK(message([](json& j) { j["pressure"].erase(0); }).find("pressure") != std::string::npos);
  CHECK_THROWS_AS(load_dataset(dir.path / "missing.json"), IoError);
  write_file_atomic(dir.path / "broken.json", "{ not json");
  CHECK_THROWS_AS(load_dataset(dir.path / "broken.json"), ValidationError);
}

TEST_CASE("infer, result bundle and eval") {
  TempDir dir("infer");
  RunConfig c = tiny_config();
  const SynthFiles files = cmd_synth(c, dir.path);
  const ResultBundle b = cmd_infer(files.dataset, c, dir.path / "run");
  CHECK(b.result.epochs == 12);

  SUBCASE("bundle reloads with the exact config and networks") {
    const ResultBundle back = load_result(dir.path / "run" / "result.json");
    CHECK(dump(result_to_json(back)) == read_file(dir.path / "run" / "result.json"));
    CHECK(dump(run_config_to_json(back.config)) == dump(run_config_to_json(c)));
    const Points pts = load_evaluation_set(*files.evaluation).points;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(train::predict_pressure(back.result, i, pts) == train::predict_pressure(b.result, i, pts));
    }
  }
  SUBCASE("CSV headers carry units and reruns are byte-identical") {
    for (const char* name : {"zeta_spectrum.csv", "alpha_spectrum.csv", "convergence.csv", "weights.csv"}) {
      const std::string text = read_file(dir.path / "run" / name);
      const std::string header = text.substr(0, text.find('\n'));
      CHECK_MESSAGE(header.find('[') != std::string::npos, name);
    }
    cmd_infer(files.dataset, c, dir.path / "run2");
    for (const char* name : {"zeta_spectrum.csv", "alpha_spectrum.csv", "convergence.csv", "weights.csv"}) {
      CHECK_MESSAGE(read_file(dir.path / "run" / name) == read_file(dir.path / "run2" / name), name);
    }
  }
  SUBCASE("zero epochs emits the initial state") {
    RunConfig z = c;
    z.budget.epochs = 0;
    const ResultBundle r = cmd_infer(files.dataset, z, dir.path / "zero");
    CHECK(r.result.epochs == 0);
    CHECK(r.result.weights.empty());
    CHECK(load_result(dir.path / "zero" / "result.json").result.trace.size() == 1);
  }
  SUBCASE("eval against the generating dataset and evaluation field") {
    const EvalReport rep = cmd_eval(dir.path / "run" / "result.json", files.dataset, files.evaluation, dir.path / "ev");
    CHECK(rep.mae_alpha >= 0.0);
    CHECK(rep.complexity.size() == 3);
    CHECK(rep.mae_p.size() == 3);
    const std::string csv = read_file(dir.path / "ev" / "metrics.csv");
    CHECK(csv.find("complexity [Pa]") != std::string::npos);
    CHECK(csv.find("\nall,") != std::string::npos);
    const json summary = load_json(dir.path / "ev" / "eval_summary.json");
    CHECK(summary.at("mae_alpha").get<double>() == rep.mae_alpha);
    const EvalReport plain = cmd_eval(dir.path / "run" / "result.json", files.dataset, std::nullopt, dir.path / "ev2");
    CHECK(read_file(dir.path / "ev2" / "metrics.csv").find("complexity") == std::string::npos);
    CHECK(plain.mae_zeta == rep.mae_zeta);
  }
  SUBCASE("a result equal to its reference scores zero") {
    ResultBundle exact = b;
    const auto mat = material_spec(c);
    for (std::size_t i = 0; i < 3; ++i) {
      exact.result.spectrum.zeta[i] = mat.impedance(exact.result.spectrum.frequencies[i]);
      exact.result.spectrum.alpha[i] = materials::absorption_at_angle(exact.result.spectrum.zeta[i]);
      exact.result.alpha_random[i] = materials::paris_random_absorption(exact.result.spectrum.zeta[i]);
    }
    const EvalReport rep = evaluate(exact, load_reference(files.dataset));
    CHECK(rep.mae_alpha == 0.0);
    CHECK(rep.mae_zeta == 0.0);
  }
  SUBCASE("mismatched grids are refused") {
    RunConfig other = c;
    other.frequencies.list_hz = {500.0, 700.0, 901.0};
    write_file_atomic(dir.path / "other.json", dump(run_config_to_json(other)));
    const std::string msg = error_of([&] { evaluate(b, load_reference(dir.path / "other.json")); });
    CHECK(msg.find("interpolation") != std::string::npos);
    other.frequencies.list_hz = {500.0, 700.0};
    write_file_atomic(dir.path / "other.json", dump(run_config_to_json(other)));
    CHECK_THROWS_AS(evaluate(b, load_reference(dir.path / "other.json")), ValidationError);
  }
}

TEST_CASE("sweep runs every cell once and resumes") {
  TempDir dir("sweep");
  RunConfig c = tiny_config();
  c.budget.epochs = 4;
  c.sweep.d1 = {0.01, 0.02};
  c.sweep.d2 = {0.03};
  c.sweep.array = {3};
  REQUIRE(sweep_cells(c).size() == 2);
  const auto rows = cmd_sweep(c, dir.path);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK(r.status == "ok");
  const std::string csv = read_file(dir.path / "sweep.csv");
  CHECK(csv.substr(0, csv.find('\n')) ==
        "d1 [m],d2 [m],array [-],snr [dB],mae_alpha [-],mae_zeta [-],epochs [-],status");
  const auto again = cmd_sweep(c, dir.path);
  for (const auto& r : again) CHECK(r.status == "skipped");
  CHECK(read_file(dir.path / "sweep.csv") == csv);

  SUBCASE("a one-cell grid matches a single infer") {
    RunConfig one = c;
    one.sweep.d1 = {0.01};
    const auto cell = cmd_sweep(one, dir.path / "one");
    RunConfig single = c;
    single.array.d1 = 0.01;
    single.sweep = SweepSection{};
    const SynthFiles f = cmd_synth(single, dir.path / "single");
    cmd_infer(f.dataset, single, dir.path / "single");
    const EvalReport rep = cmd_eval(dir.path / "single" / "result.json", f.dataset, std::nullopt, dir.path / "single");
    CHECK(cell[0].mae_alpha == rep.mae_alpha);
    CHECK(cell[0].mae_zeta == rep.mae_zeta);
  }
  SUBCASE("failed cells are recorded and the sweep continues") {
    RunConfig bad = c;
    bad.sweep.d1 = {0.01};
    bad.sweep.array = {3, 4};
    bad.loss.smoothness = true;
    bad.frequencies.list_hz = {500.0, 700.0, 900.0};
    bad.optimizer.lr = 1e200;
    const auto out = cmd_sweep(bad, dir.path / "bad");
    REQUIRE(out.size() == 2);
    for (const auto& r : out) CHECK(r.status.rfind("failed:", 0) == 0);
    CHECK(fs::exists(dir.path / "bad" / out[0].cell.name / "failure.txt"));
  }
}

TEST_CASE("unwritable output is an io error") {
  CHECK_THROWS_AS(write_file_atomic("/proc/impedans/nope.json", "x"), IoError);
}
