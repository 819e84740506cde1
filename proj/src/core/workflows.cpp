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

#include "workflows.hpp"

#include <cmath>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "error.hpp"

namespace impedans::io {

namespace {

constexpr double kRad2Deg = 180.0 / kPi;

std::string num(double v) { return format_number(v); }

json terms_to_json(const losses::FrequencyTerms& t) {
  return {{"data", encode(t.data)}, {"pde", encode(t.pde)}, {"var_re", encode(t.var_re)}, {"var_im", encode(t.var_im)}};
}

losses::FrequencyTerms terms_from_json(const json& j, const std::string& path) {
  Reader r(j, path);
  losses::FrequencyTerms t;
  r.required("data", t.data);
  r.required("pde", t.pde);
  r.required("var_re", t.var_re);
  r.required("var_im", t.var_im);
  r.finish();
  return t;
}

json complex_list(const std::vector<Complex>& v) {
  json a = json::array();
  for (const Complex& z : v) a.push_back(encode(z));
  return a;
}

json double_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(encode(x));
  return a;
}

json lambda_list(const std::vector<std::array<double, 4>>& v) {
  json a = json::array();
  for (const auto& l : v) a.push_back({encode(l[0]), encode(l[1]), encode(l[2]), encode(l[3])});
  return a;
}

bool same_grid(const std::vector<double>& a, const std::vector<double>& b, std::string& why) {
  if (a.size() != b.size()) {
    why = fmt::format("{} frequencies in the result, {} in the reference", a.size(), b.size());
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9 * std::max(std::abs(a[i]), std::abs(b[i]))) {
      why = fmt::format("bin {}: {} Hz in the result, {} Hz in the reference", i, a[i], b[i]);
      return false;
    }
  }
  return true;
}

}  // namespace

// -- result bundle ---------------------------------------------------------

json result_to_json(const ResultBundle& b) {
  const train::InferenceResult& r = b.result;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "result_bundle";
  j["dataset"] = b.dataset;
  j["config"] = run_config_to_json(b.config);
  j["seed"] = r.seed;
  j["epochs"] = r.epochs;
  j["wall_seconds"] = encode(r.wall_seconds);
  j["complexity"] = {{"index", encode(r.complexity.index)}, {"epoch_budget", r.complexity.epoch_budget}};
  j["spectrum"] = {{"frequencies_hz", double_list(r.spectrum.frequencies)},
                   {"zeta", complex_list(r.spectrum.zeta)},
                   {"alpha", double_list(r.spectrum.alpha)},
                   {"alpha_random", double_list(r.alpha_random)},
                   {"report_angle_deg", encode(r.config.report_angle * kRad2Deg)}};
  json per = json::array();
  for (const auto& t : r.final_losses.per_frequency) per.push_back(terms_to_json(t));
  json degenerate = json::array();
  for (auto d : r.final_losses.degenerate_points) degenerate.push_back(d);
  j["final_losses"] = {{"per_frequency", std::move(per)},
                       {"smooth", encode(r.final_losses.smooth)},
                       {"zeta_bar", complex_list(r.final_losses.zeta_bar)},
                       {"degenerate_points", std::move(degenerate)}};
  json weights = json::array();
  for (const auto& w : r.weights) {
    weights.push_back({{"epoch", w.epoch}, {"lambda", lambda_list(w.lambda)}, {"lambda_smooth", encode(w.lambda_smooth)}});
  }
  j["weights"] = std::move(weights);
  json trace = json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"epoch", t.epoch},
                     {"lr", encode(t.lr)},
                     {"total", encode(t.total)},
                     {"terms", terms_to_json(t.summed)},
                     {"smooth", encode(t.smooth)},
                     {"zeta_bar", complex_list(t.zeta_bar)}});
  }
  j["trace"] = std::move(trace);
  json pre = json::array();
  for (const auto& e : r.preprocess.per_frequency) {
    pre.push_back({{"scale", e.scale}, {"reference_sensor", e.reference_sensor}, {"phase_shift", e.phase_shift}});
  }
  j["preprocess"] = std::move(pre);
  j["networks"] = network_bank_to_json(r.bank);
  j["diagnostics"] = r.diagnostics;
  return j;
}

ResultBundle result_from_json(const json& j) {
  Reader r(j, "");
  int version = 0;
  r.required("schema_version", version);
  if (version != kSchemaVersion) {
    throw ValidationError(fmt::format("/schema_version: unsupported version {} (expected {})", version, kSchemaVersion));
  }
  std::string kind;
  r.required("kind", kind);
  if (kind != "result_bundle") throw ValidationError(fmt::format("/kind: expected result_bundle, got '{}'", kind));
  ResultBundle b;
  train::InferenceResult& res = b.result;
  r.required("dataset", b.dataset);
  try {
    b.config = run_config_from_json(r.raw("config"));
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("/config{}", e.what()));
  }
  res.config = train_config(b.config);
  r.required("seed", res.seed);
  r.required("epochs", res.epochs);
  r.required("wall_seconds", res.wall_seconds);
  {
    Reader c(r.raw("complexity"), "/complexity");
    c.required("index", res.complexity.index);
    c.required("epoch_budget", res.complexity.epoch_budget);
    c.finish();
  }
  {
    Reader s(r.raw("spectrum"), "/spectrum");
    double angle = 0.0;
    s.required("frequencies_hz", res.spectrum.frequencies);
    s.required("zeta", res.spectrum.zeta);
    s.required("alpha", res.spectrum.alpha);
    s.required("alpha_random", res.alpha_random);
    s.required("report_angle_deg", angle);
    s.finish();
    const std::size_t n = res.spectrum.frequencies.size();
    if (res.spectrum.zeta.size() != n || res.spectrum.alpha.size() != n || res.alpha_random.size() != n) {
      throw ValidationError("/spectrum: list lengths differ");
    }
  }
  {
    Reader f(r.raw("final_losses"), "/final_losses");
    const json& per = f.raw("per_frequency");
    if (!per.is_array()) throw ValidationError("/final_losses/per_frequency: expected an array");
    for (std::size_t i = 0; i < per.size(); ++i) {
      res.final_losses.per_frequency.push_back(terms_from_json(per[i], fmt::format("/final_losses/per_frequency/{}", i)));
    }
    f.required("smooth", res.final_losses.smooth);
    f.required("zeta_bar", res.final_losses.zeta_bar);
    std::vector<int> degenerate;
    f.required("degenerate_points", degenerate);
    for (int d : degenerate) res.final_losses.degenerate_points.push_back(static_cast<std::size_t>(d));
    f.finish();
  }
  {
    const json& weights = r.raw("weights");
    if (!weights.is_array()) throw ValidationError("/weights: expected an array");
    for (std::size_t i = 0; i < weights.size(); ++i) {
      Reader w(weights[i], fmt::format("/weights/{}", i));
      train::WeightSnapshot s;
      w.required("epoch", s.epoch);
      w.required("lambda", s.lambda);
      w.required("lambda_smooth", s.lambda_smooth);
      w.finish();
      res.weights.push_back(std::move(s));
    }
  }
  {
    const json& trace = r.raw("trace");
    if (!trace.is_array()) throw ValidationError("/trace: expected an array");
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const std::string p = fmt::format("/trace/{}", i);
      Reader t(trace[i], p);
      train::TraceRow row;
      t.required("epoch", row.epoch);
      t.required("lr", row.lr);
      t.required("total", row.total);
      row.summed = terms_from_json(t.raw("terms"), p + "/terms");
      t.required("smooth", row.smooth);
      t.required("zeta_bar", row.zeta_bar);
      t.finish();
      res.trace.push_back(std::move(row));
    }
  }
  {
    const json& pre = r.raw("preprocess");
    if (!pre.is_array()) throw ValidationError("/preprocess: expected an array");
    for (std::size_t i = 0; i < pre.size(); ++i) {
      Reader e(pre[i], fmt::format("/preprocess/{}", i));
      train::PreprocessEntry entry;
      std::uint64_t ref = 0;
      e.required("scale", entry.scale);
      e.required("reference_sensor", ref);
      e.required("phase_shift", entry.phase_shift);
      e.finish();
      entry.reference_sensor = static_cast<std::size_t>(ref);
      res.preprocess.per_frequency.push_back(entry);
    }
  }
  res.bank = network_bank_from_json(r.raw("networks"), "/networks");
  r.required("diagnostics", res.diagnostics);
  r.finish();
  const std::size_t n = res.spectrum.frequencies.size();
  if (res.bank.networks.size() != n || res.preprocess.per_frequency.size() != n) {
    throw ValidationError(fmt::format("/networks: {} networks and {} preprocessing entries for {} frequencies",
                                      res.bank.networks.size(), res.preprocess.per_frequency.size(), n));
  }
  return b;
}

ResultBundle load_result(const fs::path& path) {
  try {
    return result_from_json(load_json(path));
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

CsvTable zeta_table(const train::InferenceResult& r) {
  CsvTable t{{"frequency [Hz]", "zeta_re [-]", "zeta_im [-]"}, {}};
  for (std::size_t i = 0; i < r.spectrum.frequencies.size(); ++i) {
    t.add_row({num(r.spectrum.frequencies[i]), num(r.spectrum.zeta[i].real()), num(r.spectrum.zeta[i].imag())});
  }
  return t;
}

CsvTable alpha_table(const train::InferenceResult& r) {
  const std::string angle = num(r.config.report_angle * kRad2Deg);
  CsvTable t{{"frequency [Hz]", fmt::format("alpha_at_{}deg [-]", angle), "alpha_random [-]"}, {}};
  for (std::size_t i = 0; i < r.spectrum.frequencies.size(); ++i) {
    t.add_row({num(r.spectrum.frequencies[i]), num(r.spectrum.alpha[i]), num(r.alpha_random[i])});
  }
  return t;
}

CsvTable convergence_table(const train::InferenceResult& r) {
  CsvTable t{{"epoch [-]", "lr [-]", "total [-]", "data [-]", "pde [-]", "var_re [-]", "var_im [-]", "smooth [-]"}, {}};
  for (std::size_t i = 0; i < r.spectrum.frequencies.size(); ++i) {
    t.header.push_back(fmt::format("zeta_re_{}Hz [-]", num(r.spectrum.frequencies[i])));
    t.header.push_back(fmt::format("zeta_im_{}Hz [-]", num(r.spectrum.frequencies[i])));
  }
  for (const auto& row : r.trace) {
    std::vector<std::string> f{std::to_string(row.epoch), num(row.lr),          num(row.total),
                               num(row.summed.data),      num(row.summed.pde),  num(row.summed.var_re),
                               num(row.summed.var_im),    num(row.smooth)};
    for (const Complex& z : row.zeta_bar) {
      f.push_back(num(z.real()));
      f.push_back(num(z.imag()));
    }
    t.add_row(std::move(f));
  }
  return t;
}

CsvTable weights_table(const train::InferenceResult& r) {
  CsvTable t{{"epoch [-]", "frequency [Hz]", "lambda_data [-]", "lambda_pde [-]", "lambda_var_re [-]",
              "lambda_var_im [-]", "lambda_smooth [-]"},
             {}};
  for (const auto& w : r.weights) {
    for (std::size_t i = 0; i < w.lambda.size(); ++i) {
      t.add_row({std::to_string(w.epoch), num(r.spectrum.frequencies[i]), num(w.lambda[i][0]), num(w.lambda[i][1]),
                 num(w.lambda[i][2]), num(w.lambda[i][3]), num(w.lambda_smooth)});
    }
  }
  return t;
}

// -- synth -----------------------------------------------------------------

field::PressureMatrix synthesize_field(const RunConfig& c, const std::vector<double>& frequencies,
                                       const Points& local_points) {
  const materials::MaterialSpec material = material_spec(c);
  const AcousticMedium medium = acoustic_medium(c);
  const double deg = kPi / 180.0;
  const SourceSection& s = c.source;
  if (s.kind == "plane") {
    return field::plane_wave_over_impedance(material, s.theta_deg * deg, s.azimuth_deg * deg, frequencies,
                                            local_points, medium);
  }
  if (s.kind == "point") {
    return field::point_source_over_impedance(s.position, s.strength, material, frequencies, local_points, medium);
  }
  std::vector<field::PlaneWaveComponent> waves;
  for (const WaveSection& w : s.waves) waves.push_back({w.theta_deg * deg, w.azimuth_deg * deg, w.amplitude});
  return field::plane_wave_superposition(material, waves, frequencies, local_points, medium);
}

SynthOutputs synthesize(const RunConfig& c) {
  c.validate();
  const field::TwoLayerArray array = two_layer_array(c);
  field::PressureDataset clean;
  clean.medium = acoustic_medium(c);
  clean.frequencies = frequency_grid(c);
  clean.sensors = array.sensors;
  clean.geometry = array.geometry;
  Points local;
  for (const Vec3& p : array.sensors) local.push_back(array.geometry.to_local(p));
  clean.pressure = synthesize_field(c, clean.frequencies, local);
  clean.provenance = {{"generator", "impedans synth"}, {"config", run_config_to_json(c)}};
  clean.validate();

  SynthOutputs out;
  if (c.noise.snr_db) {
    out.dataset = field::add_complex_noise(clean, *c.noise.snr_db, c.seeds.noise);
    out.clean = std::move(clean);
  } else {
    out.dataset = std::move(clean);
  }
  if (c.evaluation.enabled) {
    metrics::EvaluationSet set;
    set.frequencies = out.dataset.frequencies;
    set.points = metrics::evaluation_points(array.geometry, evaluation_slab(c), c.seeds.evaluation);
    Points lp;
    for (const Vec3& p : set.points) lp.push_back(array.geometry.to_local(p));
    set.reference = synthesize_field(c, set.frequencies, lp);
    out.evaluation = std::move(set);
  }
  return out;
}

SynthFiles cmd_synth(const RunConfig& config, const fs::path& out_dir) {
  const SynthOutputs s = synthesize(config);
  SynthFiles files;
  files.dataset = out_dir / "dataset.json";
  save_dataset(files.dataset, s.dataset);
  if (s.clean) {
    files.clean = out_dir / "dataset_clean.json";
    save_dataset(*files.clean, *s.clean);
  }
  if (s.evaluation) {
    files.evaluation = out_dir / "eval_field.json";
    save_evaluation_set(*files.evaluation, *s.evaluation);
  }
  return files;
}

// -- infer -----------------------------------------------------------------

ResultBundle infer(const field::PressureDataset& dataset, const RunConfig& config,
                   const train::ProgressCallback& progress, std::string dataset_label) {
  config.validate();
  dataset.validate();
  const field::SamplingDomain domain =
      field::build_sampling_domain(dataset.geometry, dataset.sensors, domain_config(config), config.seeds.domain);
  ResultBundle b;
  b.config = config;
  b.dataset = std::move(dataset_label);
  b.result = train::train(dataset, domain, train_config(config), -1, progress);
  return b;
}

void write_result_bundle(const ResultBundle& b, const fs::path& out_dir) {
  write_file_atomic(out_dir / "result.json", dump(result_to_json(b)));
  write_file_atomic(out_dir / "zeta_spectrum.csv", zeta_table(b.result).str());
  write_file_atomic(out_dir / "alpha_spectrum.csv", alpha_table(b.result).str());
  write_file_atomic(out_dir / "convergence.csv", convergence_table(b.result).str());
  write_file_atomic(out_dir / "weights.csv", weights_table(b.result).str());
}

ResultBundle cmd_infer(const fs::path& dataset_path, const RunConfig& config, const fs::path& out_dir,
                       const train::ProgressCallback& progress) {
  const field::PressureDataset dataset = load_dataset(dataset_path);
  ResultBundle b = infer(dataset, config, progress, dataset_path.string());
  write_result_bundle(b, out_dir);
  return b;
}

// -- eval ------------------------------------------------------------------

EvalReference load_reference(const fs::path& path) {
  const json j = load_json(path);
  EvalReference ref;
  if (j.is_object() && j.contains("pressure")) {
    const field::PressureDataset d = load_dataset(path);
    ref.frequencies = d.frequencies;
    ref.medium = d.medium;
    if (d.provenance.contains("config")) {
      try {
        ref.material = material_spec(run_config_from_json(d.provenance.at("config")));
      } catch (const ValidationError& e) {
        throw ValidationError(fmt::format("{}: /provenance/config{}", path.string(), e.what()));
      }
    }
    if (!ref.material) {
      throw ValidationError(fmt::format("{}: dataset has no generating material in its provenance", path.string()));
    }
    return ref;
  }
  const RunConfig c = [&] {
    try {
      return run_config_from_json(j);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
    }
  }();
  ref.frequencies = frequency_grid(c);
  ref.material = material_spec(c);
  ref.medium = acoustic_medium(c);
  return ref;
}

EvalReport evaluate(const ResultBundle& b, const EvalReference& reference, const metrics::EvaluationSet* field) {
  const train::InferenceResult& r = b.result;
  const std::vector<double>& freqs = r.spectrum.frequencies;
  std::string why;
  if (!same_grid(freqs, reference.frequencies, why)) {
    throw ValidationError("result and reference frequency grids differ (" + why + "); interpolation is not performed");
  }
  if (field && !same_grid(freqs, field->frequencies, why)) {
    throw ValidationError("result and evaluation-set frequency grids differ (" + why + ")");
  }
  if (!reference.material) throw ValidationError("reference has no material");
  const double angle = r.config.report_angle;
  const std::size_t n = freqs.size();

  EvalReport rep;
  std::vector<Complex> zeta_ref(n);
  std::vector<double> alpha_ref(n), alpha_random_ref(n);
  for (std::size_t i = 0; i < n; ++i) {
    zeta_ref[i] = reference.material->impedance(freqs[i], reference.medium);
    alpha_ref[i] = materials::absorption_at_angle(zeta_ref[i], angle);
    alpha_random_ref[i] = zeta_ref[i].real() > 0.0 ? materials::paris_random_absorption(zeta_ref[i])
                                                   : std::numeric_limits<double>::quiet_NaN();
  }
  rep.mae_alpha = metrics::mae_alpha(r.spectrum.alpha, alpha_ref);
  rep.mae_zeta = metrics::mae_zeta(r.spectrum.zeta, zeta_ref);

  if (field) {
    field->validate();
    for (std::size_t i = 0; i < n; ++i) {
      rep.complexity.push_back(metrics::field_complexity(*field, i));
      const std::vector<Complex> pred = train::predict_pressure(r, i, field->points);
      rep.mae_p.push_back(metrics::mae_pressure(pred, field->reference[i]));
    }
    if (n >= 2) {
      const double rho = metrics::spearman(rep.complexity, rep.mae_p);
      if (!std::isnan(rho)) rep.spearman = rho;
    }
  }

  rep.table.header = {"frequency [Hz]", "zeta_re [-]",        "zeta_im [-]",       "zeta_ref_re [-]",
                      "zeta_ref_im [-]", "alpha [-]",         "alpha_ref [-]",     "abs_err_alpha [-]",
                      "abs_err_zeta [-]", "alpha_random [-]", "alpha_random_ref [-]"};
  if (field) {
    rep.table.header.push_back("complexity [Pa]");
    rep.table.header.push_back("mae_p [Pa]");
  }
  double sum_random = 0.0;
  std::size_t count_random = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex d = r.spectrum.zeta[i] - zeta_ref[i];
    std::vector<std::string> row{num(freqs[i]),
                                 num(r.spectrum.zeta[i].real()),
                                 num(r.spectrum.zeta[i].imag()),
                                 num(zeta_ref[i].real()),
                                 num(zeta_ref[i].imag()),
                                 num(r.spectrum.alpha[i]),
                                 num(alpha_ref[i]),
                                 num(std::abs(r.spectrum.alpha[i] - alpha_ref[i])),
                                 num(0.5 * (std::abs(d.real()) + std::abs(d.imag()))),
                                 num(r.alpha_random[i]),
                                 num(alpha_random_ref[i])};
    if (field) {
      row.push_back(num(rep.complexity[i]));
      row.push_back(num(rep.mae_p[i]));
    }
    rep.table.add_row(std::move(row));
    if (std::isfinite(r.alpha_random[i]) && std::isfinite(alpha_random_ref[i])) {
      sum_random += std::abs(r.alpha_random[i] - alpha_random_ref[i]);
      ++count_random;
    }
  }
  const double mae_random = count_random ? sum_random / count_random : std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> summary(rep.table.header.size());
  summary[0] = "all";
  summary[7] = num(rep.mae_alpha);
  summary[8] = num(rep.mae_zeta);
  double mean_p = 0.0;
  if (field) {
    for (double v : rep.mae_p) mean_p += v / static_cast<double>(n);
    summary[12] = num(mean_p);
  }
  rep.table.add_row(std::move(summary));

  rep.summary = {{"frequencies", n},
                 {"mae_alpha", encode(rep.mae_alpha)},
                 {"mae_zeta", encode(rep.mae_zeta)},
                 {"mae_alpha_random", encode(mae_random)},
                 {"report_angle_deg", encode(angle * kRad2Deg)},
                 {"epochs", r.epochs}};
  if (field) {
    rep.summary["mae_p_mean"] = encode(mean_p);
    rep.summary["spearman_complexity_mae_p"] = rep.spearman ? encode(*rep.spearman) : json(nullptr);
  }
  return rep;
}

EvalReport cmd_eval(const fs::path& result_path, const fs::path& reference_path,
                    const std::optional<fs::path>& field_path, const fs::path& out_dir) {
  const ResultBundle b = load_result(result_path);
  const EvalReference ref = load_reference(reference_path);
  std::optional<metrics::EvaluationSet> set;
  if (field_path) set = load_evaluation_set(*field_path);
  EvalReport rep = evaluate(b, ref, set ? &*set : nullptr);
  write_file_atomic(out_dir / "metrics.csv", rep.table.str());
  write_file_atomic(out_dir / "eval_summary.json", dump(rep.summary));
  return rep;
}

// -- sweep -----------------------------------------------------------------

std::vector<SweepCell> sweep_cells(const RunConfig& base) {
  const SweepSection& s = base.sweep;
  const std::vector<double> d1s = s.d1.empty() ? std::vector<double>{base.array.d1} : s.d1;
  const std::vector<double> d2s = s.d2.empty() ? std::vector<double>{base.array.d2} : s.d2;
  const std::vector<int> arrays = s.array.empty() ? std::vector<int>{base.array.nx} : s.array;
  std::vector<std::optional<double>> snrs;
  if (s.snr_db.empty()) {
    snrs.push_back(base.noise.snr_db);
  } else {
    for (double v : s.snr_db) snrs.emplace_back(v);
  }
  std::vector<SweepCell> cells;
  for (int a : arrays) {
    for (const auto& snr : snrs) {
      for (double d1 : d1s) {
        for (double d2 : d2s) {
          SweepCell c{d1, d2, a, snr, ""};
          c.name = fmt::format("n{}_d1_{}mm_d2_{}mm_snr_{}", a, num(d1 * 1e3), num(d2 * 1e3),
                               snr ? num(*snr) : std::string("none"));
          cells.push_back(std::move(c));
        }
      }
    }
  }
  return cells;
}

namespace {

RunConfig cell_config(const RunConfig& base, const SweepCell& cell) {
  RunConfig c = base;
  c.array.d1 = cell.d1;
  c.array.d2 = cell.d2;
  c.array.nx = cell.array;
  c.array.ny = cell.array;
  c.noise.snr_db = cell.snr_db;
  c.sweep = SweepSection{};
  c.validate();
  return c;
}

SweepRow run_cell(const RunConfig& base, const SweepCell& cell, const fs::path& out_dir) {
  SweepRow row;
  row.cell = cell;
  const fs::path dir = out_dir / cell.name;
  const fs::path summary = dir / "eval_summary.json";
  try {
    if (fs::exists(summary)) {
      const json s = load_json(summary);
      decode(s.at("mae_alpha"), "/mae_alpha", row.mae_alpha);
      decode(s.at("mae_zeta"), "/mae_zeta", row.mae_zeta);
      decode(s.at("epochs"), "/epochs", row.epochs);
      row.status = "skipped";
      return row;
    }
    const RunConfig c = cell_config(base, cell);
    write_file_atomic(dir / "config.json", dump(run_config_to_json(c)));
    const SynthFiles files = cmd_synth(c, dir);
    cmd_infer(files.dataset, c, dir);
    const EvalReport rep = cmd_eval(dir / "result.json", files.clean ? *files.clean : files.dataset,
                                    files.evaluation, dir);
    row.mae_alpha = rep.mae_alpha;
    row.mae_zeta = rep.mae_zeta;
    row.epochs = rep.summary.at("epochs").get<int>();
    row.status = "ok";
    std::error_code ec;
    fs::remove(dir / "failure.txt", ec);
  } catch (const std::exception& e) {
    row.status = fmt::format("failed: {}", e.what());
    try {
      write_file_atomic(dir / "failure.txt", std::string(e.what()) + "\n");
    } catch (const std::exception&) {
    }
  }
  return row;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t{{"d1 [m]", "d2 [m]", "array [-]", "snr [dB]", "mae_alpha [-]", "mae_zeta [-]", "epochs [-]", "status"},
             {}};
  for (const SweepRow& r : rows) {
    t.add_row({num(r.cell.d1), num(r.cell.d2), std::to_string(r.cell.array),
               r.cell.snr_db ? num(*r.cell.snr_db) : std::string("none"), num(r.mae_alpha), num(r.mae_zeta),
               std::to_string(r.epochs), r.status == "skipped" ? "ok" : r.status});
  }
  return t;
}

}  // namespace

std::vector<SweepRow> cmd_sweep(const RunConfig& base, const fs::path& out_dir, const SweepProgress& progress) {
  base.validate();
  const std::vector<SweepCell> cells = sweep_cells(base);
  std::vector<SweepRow> rows(cells.size());
  std::vector<bool> done(cells.size(), false);
  std::mutex mu;
  std::size_t next = 0;

  auto finish = [&](std::size_t i, SweepRow row) {
    std::lock_guard<std::mutex> lock(mu);
    rows[i] = std::move(row);
    done[i] = true;
    std::vector<SweepRow> finished;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (done[k]) finished.push_back(rows[k]);
    }
    write_file_atomic(out_dir / "sweep.csv", sweep_table(finished).str());
    if (progress) progress(rows[i]);
  };
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= cells.size()) return;
        i = next++;
      }
      finish(i, run_cell(base, cells[i], out_dir));
    }
  };
  const int workers = std::min<int>(base.sweep.workers, static_cast<int>(cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

}  // namespace impedans::io
