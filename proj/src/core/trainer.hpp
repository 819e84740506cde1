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

// Joint training of one neural field per frequency and inference of the
// spatially averaged surface impedance during optimization.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "field_oracle.hpp"
#include "losses.hpp"
#include "materials.hpp"
#include "neural_field.hpp"
#include "optimizer.hpp"

namespace impedans::train {

struct PreprocessEntry {
  double scale = 1.0;              // max |p| over the sensors
  std::size_t reference_sensor = 0;
  double phase_shift = 0.0;        // rad, phase of the reference sensor
};

/// Per-frequency transform p -> p / (scale e^{j phase_shift}).
struct PreprocessRecord {
  std::vector<PreprocessEntry> per_frequency;

  /// Maps normalized pressures of frequency i back to dataset units.
  Complex restore(std::size_t frequency, Complex normalized) const;
  field::PressureMatrix restore(const field::PressureMatrix& normalized) const;
};

std::pair<field::PressureDataset, PreprocessRecord> preprocess_dataset(const field::PressureDataset& dataset);

struct BudgetConfig {
  bool adaptive = true;
  int fixed_epochs = 5000;  // used when adaptive is off
  std::array<double, 3> thresholds{1000.0, 5000.0, 20000.0};
  std::array<int, 4> budgets{1000, 2500, 5000, 10000};

  void validate() const;
};

struct ComplexityIndex {
  double index = 0.0;
  int epoch_budget = 0;
};

/// Mean over frequencies of |spatial mean of (upper - lower)| / (k d2 * spatial
/// mean |p|), times 1e4, mapped to an epoch budget. Sensors are paired as
/// i <-> i + nx*ny (see field::build_two_layer_array).
ComplexityIndex complexity_index(const field::PressureDataset& dataset, const field::ArrayGeometry& geometry,
                                 const BudgetConfig& budget = {});

enum Term : int { kData = 0, kPde = 1, kVarRe = 2, kVarIm = 3 };

struct AdaptiveConfig {
  int update_period = 100;
  double alpha_data = 0.9;
  double alpha_pde = 0.9;
  double alpha_var = 0.999;
  /// 1 - 1e4 / E^2 when negative (the default); bounded below by min_alpha_smooth.
  double alpha_smooth = -1.0;
  double min_alpha_smooth = 0.5;
  double floor = 1e-12;

  void validate() const;
  double smooth_factor(int total_epochs) const;
};

struct AdaptiveWeightState {
  std::vector<std::array<double, 4>> lambda;  // indexed by Term
  double lambda_smooth = 1.0;
  std::array<double, 4> alpha{0.9, 0.9, 0.999, 0.999};
  double alpha_smooth = 0.99;
  double floor = 1e-12;

  static AdaptiveWeightState initial(std::size_t frequencies, const AdaptiveConfig& config, int total_epochs);
};

struct GradientNorms {
  std::vector<std::array<double, 4>> per_frequency;  // indexed by Term
  double smooth = 0.0;                               // whole-bank norm of the smoothness gradient
  bool has_smooth = false;
};

/// One EMA step towards lambda_hat = S / G with S = G_data + G_pde per
/// frequency; the smoothness target uses the l2 norm of all S.
void update_adaptive_weights(AdaptiveWeightState& state, const GradientNorms& norms);

struct TrainConfig {
  nf::NetworkArch arch;  // box is replaced by the sampling domain's box
  losses::LossConfig loss;
  optim::OptimizerConfig optimizer;
  optim::ScheduleConfig schedule;
  AdaptiveConfig adaptive;
  BudgetConfig budget;
  bool smoothness = true;
  double report_angle = 0.0;  // rad, incidence angle of the reported absorption
  std::uint64_t seed = 0;
  int threads = 1;
  int trace_period = 100;     // epochs between convergence-trace rows

  void validate() const;
};

struct TraceRow {
  int epoch = 0;
  double lr = 0.0;
  double total = 0.0;
  losses::FrequencyTerms summed;  // per-term sums over frequencies
  double smooth = 0.0;
  std::vector<Complex> zeta_bar;
};

struct WeightSnapshot {
  int epoch = 0;
  std::vector<std::array<double, 4>> lambda;
  double lambda_smooth = 0.0;
};

struct NetworkBank {
  nf::NetworkArch arch;
  std::vector<nf::NetworkParams> networks;
};

struct InferenceResult {
  materials::ImpedanceSpectrum spectrum;  // zeta_bar and absorption at report_angle
  std::vector<double> alpha_random;       // Paris; NaN where Re(zeta_bar) <= 0
  losses::LossBreakdown final_losses;
  std::vector<WeightSnapshot> weights;
  std::vector<TraceRow> trace;
  NetworkBank bank;
  PreprocessRecord preprocess;
  ComplexityIndex complexity;
  int epochs = 0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  TrainConfig config;
  std::vector<std::string> diagnostics;
};

/// Called after every trace row; returning false stops training early.
using ProgressCallback = std::function<bool(const TraceRow&)>;

/// Trains for config.budget's epoch count (or `epochs` when >= 0).
InferenceResult train(const field::PressureDataset& dataset, const field::SamplingDomain& domain,
                      const TrainConfig& config, int epochs = -1, const ProgressCallback& progress = {});

/// Network prediction in dataset units at world points.
std::vector<Complex> predict_pressure(const InferenceResult& result, std::size_t frequency, const Points& points);

/// Seed of the network for frequency i.
std::uint64_t network_seed(std::uint64_t seed, std::size_t frequency);

// Exposed for derivative tests: the composite loss of a whole bank and its
// exact gradient, with fixed weights.

struct Problem {
  std::vector<double> wavenumbers;
  field::PressureMatrix measured;  // normalized, [frequency x sensor]
  const field::SamplingDomain* domain = nullptr;
  losses::LossConfig loss;
  bool smoothness = true;
};

struct BankLoss {
  double total = 0.0;
  losses::LossBreakdown breakdown;
  std::vector<nf::NetworkParams> gradient;
};

BankLoss composite_loss(const NetworkBank& bank, const Problem& problem, const losses::LossWeights& weights);

}  // namespace impedans::train
