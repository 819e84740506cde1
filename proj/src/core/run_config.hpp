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

// Run configuration for the command-line workflows. Every field has a
// default; a file only needs the values it changes. Lengths are in meters,
// angles in degrees, frequencies in Hz.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "field_oracle.hpp"
#include "json_io.hpp"
#include "materials.hpp"
#include "metrics.hpp"
#include "trainer.hpp"

namespace impedans::io {

struct DomainSection {
  int volume_points = 512;
  int boundary_grid = 8;
  double lateral_margin = -1.0;  // negative means one array spacing
  double ceiling_margin = 0.010;
};

struct ArraySection {
  int nx = 4;
  int ny = 4;
  double spacing = 0.025;
  double d1 = 0.020;
  double d2 = 0.030;
  Vec3 center{};
  Vec3 normal{0.0, 0.0, -1.0};
};

struct NetworkSection {
  int width = 64;
  int depth = 3;
  double omega0 = 1.0;
  double omega_hidden = 1.0;
};

struct OptimizerSection {
  std::string kind = "soap";  // soap | adam
  double lr = 1e-3;
  double beta1 = 0.95;
  double beta2 = 0.95;
  double shampoo_beta = 0.95;
  double eps = 1e-8;
  int precondition_frequency = 2;
  double warmup_fraction = 0.05;
  double floor_fraction = 0.01;
};

struct LossSection {
  double huber_delta = 0.5;
  int update_period = 100;
  double alpha_data = 0.9;
  double alpha_pde = 0.9;
  double alpha_var = 0.999;
  std::optional<double> alpha_smooth;  // null: 1 - 1e4 / E^2, at least 0.5
  bool smoothness = true;
  double degenerate_floor = 1e-12;
};

struct BudgetSection {
  std::string mode = "adaptive";  // adaptive | fixed
  int epochs = 5000;              // used in fixed mode
  std::array<double, 3> thresholds{1000.0, 5000.0, 20000.0};
  std::array<int, 4> budgets{1000, 2500, 5000, 10000};
};

struct SeedSection {
  std::uint64_t network = 0;
  std::uint64_t noise = 1;
  std::uint64_t domain = 2;
  std::uint64_t evaluation = 3;
};

struct FrequencySection {
  double min_hz = 80.0;
  double max_hz = 2820.0;
  int bins = 200;
  std::vector<double> list_hz;  // overrides the linear grid when non-empty
};

struct MaterialSection {
  std::string kind = "porous";  // porous | constant
  double sigma = 39260.0;
  double thickness = 0.040;
  Complex zeta{2.0, -1.0};
};

struct WaveSection {
  double theta_deg = 0.0;
  double azimuth_deg = 0.0;
  Complex amplitude{1.0, 0.0};
};

struct SourceSection {
  std::string kind = "plane";  // plane | point | waves
  double theta_deg = 0.0;
  double azimuth_deg = 0.0;
  Vec3 position{0.0, 0.0, 1.0};  // point source, local frame
  double strength = 1.0;         // Pa at 1 m
  std::vector<WaveSection> waves;
};

struct MediumSection {
  double rho0 = 1.2;
  double c0 = 343.2;
};

struct NoiseSection {
  std::optional<double> snr_db;  // null: noise-free, no clean twin written
};

struct TrainingSection {
  int threads = 1;
  int trace_period = 100;
  double report_angle_deg = 0.0;
};

struct EvaluationSection {
  bool enabled = true;
  int points = 2000;
  double height = 0.020;
  double lateral_margin = -1.0;
};

struct SweepSection {
  std::vector<double> d1;
  std::vector<double> d2;
  std::vector<int> array;  // nx = ny per cell
  std::vector<double> snr_db;
  int workers = 1;
};

struct RunConfig {
  std::string preset = "porous";  // porous | near-rigid | constant
  DomainSection domain;
  ArraySection array;
  NetworkSection network;
  OptimizerSection optimizer;
  LossSection loss;
  BudgetSection budget;
  SeedSection seeds;
  FrequencySection frequencies;
  MaterialSection material;
  SourceSection source;
  MediumSection medium;
  NoiseSection noise;
  TrainingSection training;
  EvaluationSection evaluation;
  SweepSection sweep;

  /// Checks every section by building the core objects it describes.
  void validate() const;
};

/// Defaults of a named preset.
RunConfig preset_config(const std::string& name);

/// Applies the preset named in j (or preset_override), then the values of j.
RunConfig run_config_from_json(const json& j, const std::string& preset_override = "");
json run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path, const std::string& preset_override = "");

/// Sets the value at a JSON pointer (e.g. "/noise/snr_db") from JSON text.
void apply_override(RunConfig& config, const std::string& pointer, const std::string& value_json);

/// Derives the four seeds from one base seed.
void set_seed(RunConfig& config, std::uint64_t seed);

// Core objects described by a config.
std::vector<double> frequency_grid(const RunConfig& c);
materials::MaterialSpec material_spec(const RunConfig& c);
field::TwoLayerArray two_layer_array(const RunConfig& c);
field::DomainConfig domain_config(const RunConfig& c);
metrics::EvaluationSlab evaluation_slab(const RunConfig& c);
AcousticMedium acoustic_medium(const RunConfig& c);
train::TrainConfig train_config(const RunConfig& c);

// describe_fields() lists the fields of each section for Reader and Writer.
template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, DomainSection>
void describe_fields(V& v, S& s) {
  v("volume_points", s.volume_points);
  v("boundary_grid", s.boundary_grid);
  v("lateral_margin", s.lateral_margin);
  v("ceiling_margin", s.ceiling_margin);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, ArraySection>
void describe_fields(V& v, S& s) {
  v("nx", s.nx);
  v("ny", s.ny);
  v("spacing", s.spacing);
  v("d1", s.d1);
  v("d2", s.d2);
  v("center", s.center);
  v("normal", s.normal);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, NetworkSection>
void describe_fields(V& v, S& s) {
  v("width", s.width);
  v("depth", s.depth);
  v("omega0", s.omega0);
  v("omega_hidden", s.omega_hidden);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, OptimizerSection>
void describe_fields(V& v, S& s) {
  v("kind", s.kind);
  v("lr", s.lr);
  v("beta1", s.beta1);
  v("beta2", s.beta2);
  v("shampoo_beta", s.shampoo_beta);
  v("eps", s.eps);
  v("precondition_frequency", s.precondition_frequency);
  v("warmup_fraction", s.warmup_fraction);
  v("floor_fraction", s.floor_fraction);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, LossSection>
void describe_fields(V& v, S& s) {
  v("huber_delta", s.huber_delta);
  v("update_period", s.update_period);
  v("alpha_data", s.alpha_data);
  v("alpha_pde", s.alpha_pde);
  v("alpha_var", s.alpha_var);
  v("alpha_smooth", s.alpha_smooth);
  v("smoothness", s.smoothness);
  v("degenerate_floor", s.degenerate_floor);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, BudgetSection>
void describe_fields(V& v, S& s) {
  v("mode", s.mode);
  v("epochs", s.epochs);
  v("thresholds", s.thresholds);
  v("budgets", s.budgets);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, SeedSection>
void describe_fields(V& v, S& s) {
  v("network", s.network);
  v("noise", s.noise);
  v("domain", s.domain);
  v("evaluation", s.evaluation);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, FrequencySection>
void describe_fields(V& v, S& s) {
  v("min_hz", s.min_hz);
  v("max_hz", s.max_hz);
  v("bins", s.bins);
  v("list_hz", s.list_hz);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, MaterialSection>
void describe_fields(V& v, S& s) {
  v("kind", s.kind);
  v("sigma", s.sigma);
  v("thickness", s.thickness);
  v("zeta", s.zeta);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, WaveSection>
void describe_fields(V& v, S& s) {
  v("theta_deg", s.theta_deg);
  v("azimuth_deg", s.azimuth_deg);
  v("amplitude", s.amplitude);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, SourceSection>
void describe_fields(V& v, S& s) {
  v("kind", s.kind);
  v("theta_deg", s.theta_deg);
  v("azimuth_deg", s.azimuth_deg);
  v("position", s.position);
  v("strength", s.strength);
  v("waves", s.waves);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, MediumSection>
void describe_fields(V& v, S& s) {
  v("rho0", s.rho0);
  v("c0", s.c0);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, NoiseSection>
void describe_fields(V& v, S& s) {
  v("snr_db", s.snr_db);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, TrainingSection>
void describe_fields(V& v, S& s) {
  v("threads", s.threads);
  v("trace_period", s.trace_period);
  v("report_angle_deg", s.report_angle_deg);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, EvaluationSection>
void describe_fields(V& v, S& s) {
  v("enabled", s.enabled);
  v("points", s.points);
  v("height", s.height);
  v("lateral_margin", s.lateral_margin);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, SweepSection>
void describe_fields(V& v, S& s) {
  v("d1", s.d1);
  v("d2", s.d2);
  v("array", s.array);
  v("snr_db", s.snr_db);
  v("workers", s.workers);
}

template <class V, class S> requires std::is_same_v<std::remove_const_t<S>, RunConfig>
void describe_fields(V& v, S& s) {
  v("preset", s.preset);
  v("domain", s.domain);
  v("array", s.array);
  v("network", s.network);
  v("optimizer", s.optimizer);
  v("loss", s.loss);
  v("budget", s.budget);
  v("seeds", s.seeds);
  v("frequencies", s.frequencies);
  v("material", s.material);
  v("source", s.source);
  v("medium", s.medium);
  v("noise", s.noise);
  v("training", s.training);
  v("evaluation", s.evaluation);
  v("sweep", s.sweep);
}

}  // namespace impedans::io
