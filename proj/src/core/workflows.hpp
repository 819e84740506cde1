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

#pragma once

// The synth / infer / eval / sweep workflows behind the command-line tool,
// and the result bundle they exchange.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "files.hpp"
#include "run_config.hpp"

namespace impedans::io {

namespace fs = std::filesystem;

/// An inference result together with the exact configuration that produced it.
struct ResultBundle {
  train::InferenceResult result;
  RunConfig config;
  std::string dataset;  // path or label of the training data
};

json result_to_json(const ResultBundle& bundle);
ResultBundle result_from_json(const json& j);
ResultBundle load_result(const fs::path& path);

CsvTable zeta_table(const train::InferenceResult& r);
CsvTable alpha_table(const train::InferenceResult& r);
CsvTable convergence_table(const train::InferenceResult& r);
CsvTable weights_table(const train::InferenceResult& r);

// -- synth -----------------------------------------------------------------

struct SynthOutputs {
  field::PressureDataset dataset;              // noisy when an snr is configured
  std::optional<field::PressureDataset> clean;  // written only when an snr is configured
  std::optional<metrics::EvaluationSet> evaluation;
};

/// Pressures of the configured source over the configured material at local points.
field::PressureMatrix synthesize_field(const RunConfig& config, const std::vector<double>& frequencies,
                                       const Points& local_points);
SynthOutputs synthesize(const RunConfig& config);

struct SynthFiles {
  fs::path dataset;
  std::optional<fs::path> clean;
  std::optional<fs::path> evaluation;
};

/// Writes dataset.json, dataset_clean.json (with an snr) and eval_field.json.
SynthFiles cmd_synth(const RunConfig& config, const fs::path& out_dir);

// -- infer -----------------------------------------------------------------

ResultBundle infer(const field::PressureDataset& dataset, const RunConfig& config,
                   const train::ProgressCallback& progress = {}, std::string dataset_label = "");

/// Writes result.json and the spectrum, trace and weight CSVs.
void write_result_bundle(const ResultBundle& bundle, const fs::path& out_dir);

ResultBundle cmd_infer(const fs::path& dataset_path, const RunConfig& config, const fs::path& out_dir,
                       const train::ProgressCallback& progress = {});

// -- eval ------------------------------------------------------------------

struct EvalReference {
  std::vector<double> frequencies;
  std::optional<materials::MaterialSpec> material;
  AcousticMedium medium;
};

/// Accepts a dataset written by synth (material taken from its provenance)
/// or a run configuration.
EvalReference load_reference(const fs::path& path);

struct EvalReport {
  CsvTable table;
  json summary;
  double mae_alpha = 0.0;
  double mae_zeta = 0.0;
  std::vector<double> complexity;  // per frequency, when an evaluation set is given
  std::vector<double> mae_p;
  std::optional<double> spearman;
};

/// Frequency grids must agree to 1e-9 relative; no interpolation.
EvalReport evaluate(const ResultBundle& bundle, const EvalReference& reference,
                    const metrics::EvaluationSet* field = nullptr);

/// Writes metrics.csv and eval_summary.json.
EvalReport cmd_eval(const fs::path& result_path, const fs::path& reference_path,
                    const std::optional<fs::path>& field_path, const fs::path& out_dir);

// -- sweep -----------------------------------------------------------------

struct SweepCell {
  double d1 = 0.0;
  double d2 = 0.0;
  int array = 0;
  std::optional<double> snr_db;
  std::string name;  // directory name
};

std::vector<SweepCell> sweep_cells(const RunConfig& base);

struct SweepRow {
  SweepCell cell;
  double mae_alpha = std::numeric_limits<double>::quiet_NaN();
  double mae_zeta = std::numeric_limits<double>::quiet_NaN();
  int epochs = 0;
  std::string status;  // "ok", "skipped" (done earlier) or "failed: ..."
};

/// Called after each finished cell.
using SweepProgress = std::function<void(const SweepRow&)>;

/// Runs synth, infer and eval in <out_dir>/<cell>; cells with an existing
/// eval_summary.json are read back instead of rerun. Writes sweep.csv.
std::vector<SweepRow> cmd_sweep(const RunConfig& base, const fs::path& out_dir, const SweepProgress& progress = {});

}  // namespace impedans::io
