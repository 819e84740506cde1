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

// SOAP (Adam in the eigenbasis of Shampoo's gradient covariances) and a plain
// Adam fallback, both operating tensor by tensor on NetworkParams.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "neural_field.hpp"

namespace impedans::optim {

enum class OptimizerKind { kSoap, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSoap;
  double peak_lr = 1e-3;
  double beta1 = 0.95;
  double beta2 = 0.95;
  double shampoo_beta = 0.95;  // covariance accumulators
  double eps = 1e-8;
  int precondition_frequency = 2;

  void validate() const;
};

struct ScheduleConfig {
  double warmup_fraction = 0.05;
  double floor_fraction = 0.01;

  void validate() const;
};

/// Linear warmup from 0 to peak over warmup_fraction * E epochs, then cosine
/// decay reaching floor_fraction * peak at epoch E - 1.
double lr_at_epoch(const ScheduleConfig& schedule, double peak_lr, int epoch, int total_epochs);

class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const nf::NetworkParams& like);

  /// params -= step(grad) at learning rate lr.
  void step(nf::NetworkParams& params, const nf::NetworkParams& grad, double lr);

  int steps() const { return step_; }
  /// Tensors that fell back to an unrotated step because an eigendecomposition failed.
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  struct TensorState {
    bool rotated = false;
    Eigen::MatrixXd exp_avg;
    Eigen::MatrixXd exp_avg_sq;
    Eigen::MatrixXd left_cov, right_cov;
    Eigen::MatrixXd left_basis, right_basis;
    bool has_eigenbasis = false;
  };

  void soap_tensor(TensorState& s, const std::string& name, Eigen::Map<Eigen::MatrixXd> w,
                   Eigen::Map<const Eigen::MatrixXd> g, double step_size);
  void adam_tensor(TensorState& s, Eigen::Map<Eigen::MatrixXd> w, Eigen::Map<const Eigen::MatrixXd> g,
                   double step_size);
  void refresh_basis(TensorState& s, const std::string& name);

  OptimizerConfig config_;
  std::vector<TensorState> states_;
  int step_ = 0;
  std::vector<std::string> diagnostics_;
};

}  // namespace impedans::optim
