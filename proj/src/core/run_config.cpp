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

#include "run_config.hpp"

#include <cmath>

#include <fmt/format.h>

#include "error.hpp"

namespace impedans::io {

namespace {

double radians(double deg) { return deg * kPi / 180.0; }

template <class F>
void section_check(const char* section, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("/{}: {}", section, e.what()));
  } catch (const Error& e) {
    throw ValidationError(fmt::format("/{}: {}", section, e.what()));
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "porous") return c;
  if (name == "near-rigid") {
    c.material.kind = "constant";
    c.material.zeta = {39.0, 0.0};
    c.frequencies.max_hz = 1420.0;
    c.array.d1 = 0.005;
    c.array.d2 = 0.010;
    return c;
  }
  if (name == "constant") {
    c.material.kind = "constant";
    c.material.zeta = {2.0, -1.0};
    c.frequencies.min_hz = 500.0;
    c.frequencies.max_hz = 2000.0;
    c.frequencies.bins = 20;
    return c;
  }
  throw ValidationError(fmt::format("/preset: unknown preset '{}' (porous, near-rigid, constant)", name));
}

RunConfig run_config_from_json(const json& j, const std::string& preset_override) {
  if (!j.is_object()) throw ValidationError("/: config must be a JSON object");
  std::string preset = "porous";
  if (j.contains("preset")) decode(j.at("preset"), "/preset", preset);
  if (!preset_override.empty()) preset = preset_override;
  RunConfig c = preset_config(preset);
  Reader r(j, "");
  describe_fields(r, c);
  r.finish();
  c.preset = preset;
  c.validate();
  return c;
}

json run_config_to_json(const RunConfig& config) {
  json j;
  Writer w(j);
  describe_fields(w, config);
  return j;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::string& preset_override) {
  try {
    return run_config_from_json(load_json(path), preset_override);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void apply_override(RunConfig& config, const std::string& pointer, const std::string& value_json) {
  json j = run_config_to_json(config);
  const json value = parse_json(value_json, pointer);
  try {
    j[json::json_pointer(pointer)] = value;
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("{}: cannot set: {}", pointer, e.what()));
  }
  config = run_config_from_json(j, "");
}

void set_seed(RunConfig& config, std::uint64_t seed) {
  config.seeds.network = seed;
  config.seeds.noise = seed + 1;
  config.seeds.domain = seed + 2;
  config.seeds.evaluation = seed + 3;
}

std::vector<double> frequency_grid(const RunConfig& c) {
  const FrequencySection& f = c.frequencies;
  if (!f.list_hz.empty()) return f.list_hz;
  if (f.bins == 1) return {f.min_hz};
  std::vector<double> out(f.bins);
  for (int i = 0; i < f.bins; ++i) out[i] = f.min_hz + (f.max_hz - f.min_hz) * i / (f.bins - 1);
  return out;
}

materials::MaterialSpec material_spec(const RunConfig& c) {
  if (c.material.kind == "porous") return materials::MaterialSpec::porous(c.material.sigma, c.material.thickness);
  if (c.material.kind == "constant") return materials::MaterialSpec::constant(c.material.zeta);
  throw ValidationError(fmt::format("/material/kind: unknown material '{}' (porous, constant)", c.material.kind));
}

field::TwoLayerArray two_layer_array(const RunConfig& c) {
  const ArraySection& a = c.array;
  return field::build_two_layer_array(a.nx, a.ny, a.spacing, a.d1, a.d2, a.center, a.normal);
}

field::DomainConfig domain_config(const RunConfig& c) {
  field::DomainConfig d;
  d.volume_points = c.domain.volume_points;
  d.boundary_grid = c.domain.boundary_grid;
  d.lateral_margin = c.domain.lateral_margin;
  d.ceiling_margin = c.domain.ceiling_margin;
  return d;
}

metrics::EvaluationSlab evaluation_slab(const RunConfig& c) {
  return {c.evaluation.points, c.evaluation.height, c.evaluation.lateral_margin};
}

AcousticMedium acoustic_medium(const RunConfig& c) { return {c.medium.rho0, c.medium.c0}; }

train::TrainConfig train_config(const RunConfig& c) {
  train::TrainConfig t;
  t.arch.hidden_width = c.network.width;
  t.arch.hidden_layers = c.network.depth;
  t.arch.omega0 = c.network.omega0;
  t.arch.omega_hidden = c.network.omega_hidden;
  t.loss.huber_delta = c.loss.huber_delta;
  t.loss.degenerate_floor = c.loss.degenerate_floor;
  if (c.optimizer.kind == "soap") {
    t.optimizer.kind = optim::OptimizerKind::kSoap;
  } else if (c.optimizer.kind == "adam") {
    t.optimizer.kind = optim::OptimizerKind::kAdam;
  } else {
    throw ValidationError(fmt::format("/optimizer/kind: unknown optimizer '{}' (soap, adam)", c.optimizer.kind));
  }
  t.optimizer.peak_lr = c.optimizer.lr;
  t.optimizer.beta1 = c.optimizer.beta1;
  t.optimizer.beta2 = c.optimizer.beta2;
  t.optimizer.shampoo_beta = c.optimizer.shampoo_beta;
  t.optimizer.eps = c.optimizer.eps;
  t.optimizer.precondition_frequency = c.optimizer.precondition_frequency;
  t.schedule.warmup_fraction = c.optimizer.warmup_fraction;
  t.schedule.floor_fraction = c.optimizer.floor_fraction;
  t.adaptive.update_period = c.loss.update_period;
  t.adaptive.alpha_data = c.loss.alpha_data;
  t.adaptive.alpha_pde = c.loss.alpha_pde;
  t.adaptive.alpha_var = c.loss.alpha_var;
  t.adaptive.alpha_smooth = c.loss.alpha_smooth.value_or(-1.0);
  if (c.budget.mode == "adaptive") {
    t.budget.adaptive = true;
  } else if (c.budget.mode == "fixed") {
    t.budget.adaptive = false;
  } else {
    throw ValidationError(fmt::format("/budget/mode: unknown mode '{}' (adaptive, fixed)", c.budget.mode));
  }
  t.budget.fixed_epochs = c.budget.epochs;
  t.budget.thresholds = c.budget.thresholds;
  t.budget.budgets = c.budget.budgets;
  t.smoothness = c.loss.smoothness;
  t.report_angle = radians(c.training.report_angle_deg);
  t.seed = c.seeds.network;
  t.threads = c.training.threads;
  t.trace_period = c.training.trace_period;
  return t;
}

void RunConfig::validate() const {
  section_check("array", [&] { two_layer_array(*this); });
  section_check("domain", [&] {
    require(domain.volume_points >= 1, "volume_points must be >= 1");
    require(domain.boundary_grid >= 2, "boundary_grid must be >= 2");
    require(domain.ceiling_margin >= 0.0, "ceiling_margin must be >= 0");
  });
  section_check("material", [&] { material_spec(*this); });
  section_check("medium", [&] { require(medium.rho0 > 0.0 && medium.c0 > 0.0, "rho0 and c0 must be > 0"); });
  section_check("frequencies", [&] {
    if (frequencies.list_hz.empty()) {
      require(frequencies.bins >= 1, "bins must be >= 1");
      require(frequencies.min_hz > 0.0 && frequencies.max_hz >= frequencies.min_hz,
              "need 0 < min_hz <= max_hz");
    }
    for (double f : frequency_grid(*this)) require(f > 0.0 && std::isfinite(f), "frequencies must be finite and > 0");
  });
  section_check("source", [&] {
    if (source.kind == "plane") {
      require(source.theta_deg >= 0.0 && source.theta_deg < 90.0, "theta_deg must be in [0, 90)");
    } else if (source.kind == "point") {
      require(source.position.z > 0.0, "position must lie above the surface (z > 0)");
      require(std::isfinite(source.strength), "strength must be finite");
    } else if (source.kind == "waves") {
      require(!source.waves.empty(), "waves must list at least one component");
      for (const WaveSection& w : source.waves) {
        require(w.theta_deg >= 0.0 && w.theta_deg < 90.0, "every wave needs theta_deg in [0, 90)");
      }
    } else {
      throw ValidationError(fmt::format("unknown source kind '{}' (plane, point, waves)", source.kind));
    }
  });
  section_check("noise", [&] {
    if (noise.snr_db) require(!std::isnan(*noise.snr_db), "snr_db must be a number, \"inf\" or null");
  });
  section_check("training", [&] {
    require(training.threads >= 0, "threads must be >= 0 (0 means all cores)");
    require(training.report_angle_deg >= 0.0 && training.report_angle_deg < 90.0, "report_angle_deg must be in [0, 90)");
  });
  section_check("evaluation", [&] {
    require(evaluation.points >= 2, "points must be >= 2");
    require(evaluation.height > 0.0, "height must be > 0");
  });
  section_check("sweep", [&] {
    require(sweep.workers >= 1, "workers must be >= 1");
    for (int n : sweep.array) require(n >= 2, "array sizes must be >= 2");
    for (double d : sweep.d1) require(d > 0.0, "d1 values must be > 0");
    for (double d : sweep.d2) require(d > 0.0, "d2 values must be > 0");
  });
  // the remaining sections are checked by the trainer's own validation
  const train::TrainConfig t = [&] {
    train::TrainConfig out;
    section_check("optimizer", [&] { out = train_config(*this); });
    return out;
  }();
  section_check("network", [&] { t.arch.validate(); });
  section_check("optimizer", [&] {
    t.optimizer.validate();
    t.schedule.validate();
  });
  section_check("loss", [&] {
    t.loss.validate();
    t.adaptive.validate();
  });
  section_check("budget", [&] { t.budget.validate(); });
  section_check("training", [&] { t.validate(); });
}

}  // namespace impedans::io
