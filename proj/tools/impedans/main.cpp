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

// impedans: synthesize array data, infer surface impedance, evaluate and sweep.
//
// Exit codes: 0 success, 1 invalid input (arguments, files, configuration,
// i/o), 2 numeric failure (divergence, non-finite values).

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "impedans.h"

namespace {

int exit_code(impedans_status s) {
  switch (s) {
    case IMPEDANS_OK: return 0;
    case IMPEDANS_ERROR_NUMERIC:
    case IMPEDANS_ERROR_INTERNAL: return 2;
    default: return 1;
  }
}

int report(impedans_status s, const char* what) {
  if (s != IMPEDANS_OK) {
    std::fprintf(stderr, "impedans %s: %s: %s\n", what, impedans_status_name(s), impedans_last_error());
  }
  return exit_code(s);
}

struct Common {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string snr;
  std::optional<int> epochs;
  std::string out;
  std::vector<std::string> sets;
  bool quiet = false;
};

void add_config_options(CLI::App* cmd, Common& c, bool with_snr, bool with_epochs) {
  cmd->add_option("--config", c.config, "Run configuration (JSON); flags override its values")
      ->check(CLI::ExistingFile);
  cmd->add_option("--preset", c.preset, "Defaults to start from: porous, near-rigid or constant");
  cmd->add_option("--seed", c.seed, "Base seed for networks, noise, collocation and evaluation points");
  if (with_snr) cmd->add_option("--snr", c.snr, "Noise level in dB, or inf");
  if (with_epochs) cmd->add_option("--epochs", c.epochs, "Fixed epoch count (disables the adaptive budget)");
  cmd->add_option("--set", c.sets, "Override one config value: /json/pointer=value (repeatable)");
}

class Config {
 public:
  ~Config() { impedans_config_free(handle_); }
  impedans_config* get() { return handle_; }

  impedans_status build(const Common& c) {
    impedans_status s = impedans_config_load(c.config.empty() ? nullptr : c.config.c_str(),
                                             c.preset.empty() ? nullptr : c.preset.c_str(), &handle_);
    if (s != IMPEDANS_OK) return s;
    for (const std::string& kv : c.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "impedans: --set expects /pointer=value, got '%s'\n", kv.c_str());
        return IMPEDANS_ERROR_VALIDATION;
      }
      s = impedans_config_set(handle_, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
      if (s != IMPEDANS_OK) return s;
    }
    if (c.seed && (s = impedans_config_set_seed(handle_, *c.seed)) != IMPEDANS_OK) return s;
    if (!c.snr.empty() && (s = impedans_config_set_snr(handle_, c.snr.c_str())) != IMPEDANS_OK) return s;
    if (c.epochs && (s = impedans_config_set_epochs(handle_, *c.epochs)) != IMPEDANS_OK) return s;
    return IMPEDANS_OK;
  }

 private:
  impedans_config* handle_ = nullptr;
};

int print_progress(void* user, int epoch, double lr, double total) {
  if (!*static_cast<bool*>(user)) std::fprintf(stderr, "epoch %6d  lr %.3e  loss %.6e\n", epoch, lr, total);
  return 1;
}

void print_cell(void*, const char* cell, const char* status, double mae_alpha, double mae_zeta) {
  std::fprintf(stderr, "%s: %s  MAE_alpha %.4f  MAE_zeta %.4f\n", cell, status, mae_alpha, mae_zeta);
}

int run_synth(const Common& c) {
  Config cfg;
  if (impedans_status s = cfg.build(c); s != IMPEDANS_OK) return report(s, "synth");
  const impedans_status s = impedans_synth(cfg.get(), c.out.c_str());
  if (s == IMPEDANS_OK && !c.quiet) std::printf("%s/dataset.json\n", c.out.c_str());
  return report(s, "synth");
}

int run_infer(const Common& c, const std::string& dataset_path) {
  Config cfg;
  if (impedans_status s = cfg.build(c); s != IMPEDANS_OK) return report(s, "infer");
  impedans_dataset* dataset = nullptr;
  if (impedans_status s = impedans_dataset_load(dataset_path.c_str(), &dataset); s != IMPEDANS_OK) {
    return report(s, "infer");
  }
  impedans_result* result = nullptr;
  bool quiet = c.quiet;
  impedans_status s = impedans_infer(dataset, cfg.get(), print_progress, &quiet, &result);
  impedans_dataset_free(dataset);
  if (s == IMPEDANS_OK) s = impedans_result_write(result, c.out.c_str());
  if (s == IMPEDANS_OK) {
    for (size_t i = 0; i < impedans_result_diagnostic_count(result); ++i) {
      std::fprintf(stderr, "note: %s\n", impedans_result_diagnostic(result, i));
    }
    if (!c.quiet) {
      std::printf("frequency_hz,zeta_re,zeta_im,alpha\n");
      for (size_t i = 0; i < impedans_result_frequency_count(result); ++i) {
        double f = 0, re = 0, im = 0, a = 0;
        impedans_result_spectrum(result, i, &f, &re, &im, &a);
        std::printf("%g,%.6g,%.6g,%.6g\n", f, re, im, a);
      }
    }
  }
  impedans_result_free(result);
  return report(s, "infer");
}

int run_eval(const Common& c, const std::string& result, const std::string& reference, const std::string& field) {
  double mae_alpha = 0.0, mae_zeta = 0.0;
  const impedans_status s = impedans_eval(result.c_str(), reference.c_str(), field.empty() ? nullptr : field.c_str(),
                                          c.out.c_str(), &mae_alpha, &mae_zeta);
  if (s == IMPEDANS_OK && !c.quiet) std::printf("MAE_alpha %.6g\nMAE_zeta %.6g\n", mae_alpha, mae_zeta);
  return report(s, "eval");
}

int run_sweep(const Common& c) {
  Config cfg;
  if (impedans_status s = cfg.build(c); s != IMPEDANS_OK) return report(s, "sweep");
  size_t failed = 0;
  const impedans_status s = impedans_sweep(cfg.get(), c.out.c_str(), c.quiet ? nullptr : print_cell, nullptr, &failed);
  if (s == IMPEDANS_OK && failed > 0) std::fprintf(stderr, "impedans sweep: %zu cell(s) failed\n", failed);
  return report(s, "sweep");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface impedance inference from two-layer microphone array data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", impedans_version());

  const char* env_out = std::getenv("IMPEDANS_OUT_DIR");
  Common common;
  common.out = env_out && *env_out ? env_out : "impedans_out";

  auto* synth = app.add_subcommand("synth", "Synthesize an array dataset from the analytic field model");
  add_config_options(synth, common, true, false);
  synth->add_flag("-q,--quiet", common.quiet, "Only print errors");
  synth->add_option("--out", common.out, "Output directory (default: $IMPEDANS_OUT_DIR or ./impedans_out)");

  std::string dataset;
  auto* infer = app.add_subcommand("infer", "Train the neural fields and infer the impedance spectrum");
  infer->add_option("dataset,--dataset", dataset, "Dataset JSON")->required()->check(CLI::ExistingFile);
  add_config_options(infer, common, false, true);
  infer->add_flag("-q,--quiet", common.quiet, "Only print errors");
  infer->add_option("--out", common.out, "Output directory (default: $IMPEDANS_OUT_DIR or ./impedans_out)");

  std::string result, reference, field;
  auto* eval = app.add_subcommand("eval", "Compare an inference result against the generating reference");
  eval->add_option("--result", result, "result.json written by infer")->required()->check(CLI::ExistingFile);
  eval->add_option("--reference", reference, "Dataset written by synth, or a run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--field", field, "Evaluation-set field file (eval_field.json) for MAE_p and complexity")
      ->check(CLI::ExistingFile);
  eval->add_flag("-q,--quiet", common.quiet, "Only print errors");
  eval->add_option("--out", common.out, "Output directory (default: $IMPEDANS_OUT_DIR or ./impedans_out)");

  auto* sweep = app.add_subcommand("sweep", "Run synth, infer and eval over the configured grid");
  add_config_options(sweep, common, true, true);
  sweep->add_flag("-q,--quiet", common.quiet, "Only print errors");
  sweep->add_option("--out", common.out, "Output directory (default: $IMPEDANS_OUT_DIR or ./impedans_out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (synth->parsed()) return run_synth(common);
  if (infer->parsed()) return run_infer(common, dataset);
  if (eval->parsed()) return run_eval(common, result, reference, field);
  return run_sweep(common);
}
