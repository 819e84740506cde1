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

#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "error.hpp"

namespace impedans::optim {

using Eigen::MatrixXd;

void OptimizerConfig::validate() const {
  if (!(peak_lr > 0.0)) throw DomainError(fmt::format("peak learning rate must be > 0, got {}", peak_lr));
  for (const double b : {beta1, beta2, shampoo_beta}) {
    if (!(b >= 0.0 && b < 1.0)) throw DomainError(fmt::format("moment decay must be in [0, 1), got {}", b));
  }
  if (!(eps > 0.0)) throw DomainError(fmt::format("optimizer eps must be > 0, got {}", eps));
  if (precondition_frequency < 1) {
    throw DomainError(fmt::format("precondition frequency must be >= 1, got {}", precondition_frequency));
  }
}

void ScheduleConfig::validate() const {
  if (!(warmup_fraction > 0.0 && warmup_fraction < 1.0)) {
    throw DomainError(fmt::format("warmup fraction must be in (0, 1), got {}", warmup_fraction));
  }
  if (!(floor_fraction >= 0.0 && floor_fraction <= 1.0)) {
    throw DomainError(fmt::format("lr floor fraction must be in [0, 1], got {}", floor_fraction));
  }
}

double lr_at_epoch(const ScheduleConfig& schedule, double peak_lr, int epoch, int total_epochs) {
  const double warmup = schedule.warmup_fraction * total_epochs;
  const double e = epoch;
  if (e < warmup) return peak_lr * e / warmup;
  const double span = (total_epochs - 1) - warmup;
  if (!(span > 0.0)) return peak_lr;
  const double t = std::min(1.0, (e - warmup) / span);
  const double floor = schedule.floor_fraction * peak_lr;
  return floor + (peak_lr - floor) * 0.5 * (1.0 + std::cos(kPi * t));
}

Optimizer::Optimizer(const OptimizerConfig& config, const nf::NetworkParams& like) : config_(config) {
  config_.validate();
  like.visit([&](const std::string&, auto m) {
    TensorState s;
    s.rotated = config_.kind == OptimizerKind::kSoap && m.rows() > 1 && m.cols() > 1;
    s.exp_avg = MatrixXd::Zero(m.rows(), m.cols());
    s.exp_avg_sq = MatrixXd::Zero(m.rows(), m.cols());
    if (s.rotated) {
      s.left_cov = MatrixXd::Zero(m.rows(), m.rows());
      s.right_cov = MatrixXd::Zero(m.cols(), m.cols());
      s.left_basis = MatrixXd::Identity(m.rows(), m.rows());
      s.right_basis = MatrixXd::Identity(m.cols(), m.cols());
    }
    states_.push_back(std::move(s));
  });
}

void Optimizer::step(nf::NetworkParams& params, const nf::NetworkParams& grad, double lr) {
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, step_);
  const double bc2 = 1.0 - std::pow(config_.beta2, step_);
  const double step_size = lr * std::sqrt(bc2) / bc1;

  std::vector<Eigen::Map<const MatrixXd>> grads;
  grad.visit([&](const std::string&, auto m) { grads.push_back(m); });
  std::size_t index = 0;
  params.visit([&](const std::string& name, auto w) {
    if (index >= grads.size() || grads[index].rows() != w.rows() || grads[index].cols() != w.cols()) {
      throw DomainError(fmt::format("gradient does not match parameter tensor {}", name));
    }
    TensorState& s = states_[index];
    if (s.rotated) {
      soap_tensor(s, name, w, grads[index], step_size);
    } else {
      adam_tensor(s, w, grads[index], step_size);
    }
    ++index;
  });
}

void Optimizer::adam_tensor(TensorState& s, Eigen::Map<MatrixXd> w, Eigen::Map<const MatrixXd> g,
                            double step_size) {
  s.exp_avg = config_.beta1 * s.exp_avg + (1.0 - config_.beta1) * g;
  s.exp_avg_sq = config_.beta2 * s.exp_avg_sq + (1.0 - config_.beta2) * g.cwiseAbs2();
  w.array() -= step_size * s.exp_avg.array() / (s.exp_avg_sq.array().sqrt() + config_.eps);
}

void Optimizer::soap_tensor(TensorState& s, const std::string& name, Eigen::Map<MatrixXd> w,
                            Eigen::Map<const MatrixXd> g, double step_size) {
  const MatrixXd g_rot = s.left_basis.transpose() * g * s.right_basis;
  s.exp_avg = config_.beta1 * s.exp_avg + (1.0 - config_.beta1) * g;
  s.exp_avg_sq = config_.beta2 * s.exp_avg_sq + (1.0 - config_.beta2) * g_rot.cwiseAbs2();
  const MatrixXd m_rot = s.left_basis.transpose() * s.exp_avg * s.right_basis;
  const MatrixXd n_rot = (m_rot.array() / (s.exp_avg_sq.array().sqrt() + config_.eps)).matrix();
  w -= step_size * (s.left_basis * n_rot * s.right_basis.transpose());

  const double b = config_.shampoo_beta;
  s.left_cov = b * s.left_cov + (1.0 - b) * (g * g.transpose());
  s.right_cov = b * s.right_cov + (1.0 - b) * (g.transpose() * g);
  if (step_ % config_.precondition_frequency == 0) refresh_basis(s, name);
}

namespace {

// Eigenvectors sorted by decreasing eigenvalue; false on failure.
bool initial_basis(const MatrixXd& cov, MatrixXd& basis) {
  const MatrixXd shifted = cov + 1e-30 * MatrixXd::Identity(cov.rows(), cov.cols());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(shifted);
  if (eig.info() != Eigen::Success || !eig.eigenvectors().allFinite()) return false;
  basis = eig.eigenvectors().rowwise().reverse();
  return true;
}

// One power-iteration step with QR re-orthonormalization. Columns are first
// reordered by their Rayleigh quotients; the same permutation is applied along
// `axis` of the second-moment estimate so it stays aligned with the basis.
bool refine_basis(const MatrixXd& cov, MatrixXd& basis, MatrixXd& second_moment, int axis) {
  const Eigen::VectorXd est = (basis.transpose() * cov * basis).diagonal();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(est.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return est[a] > est[b]; });
  MatrixXd sorted(basis.rows(), basis.cols());
  MatrixXd moment = second_moment;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto src = order[i];
    const auto dst = static_cast<Eigen::Index>(i);
    sorted.col(dst) = basis.col(src);
    if (axis == 0) {
      moment.row(dst) = second_moment.row(src);
    } else {
      moment.col(dst) = second_moment.col(src);
    }
  }
  const MatrixXd power = cov * sorted;
  Eigen::HouseholderQR<MatrixXd> qr(power);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(power.rows(), power.cols());
  if (!q.allFinite()) return false;
  basis = std::move(q);
  second_moment = std::move(moment);
  return true;
}

}  // namespace

void Optimizer::refresh_basis(TensorState& s, const std::string& name) {
  bool ok = true;
  if (!s.has_eigenbasis) {
    MatrixXd left, right;
    ok = initial_basis(s.left_cov, left) && initial_basis(s.right_cov, right);
    if (ok) {
      s.left_basis = std::move(left);
      s.right_basis = std::move(right);
      s.has_eigenbasis = true;
    }
  } else {
    MatrixXd left = s.left_basis, right = s.right_basis, moment = s.exp_avg_sq;
    ok = refine_basis(s.left_cov, left, moment, 0) && refine_basis(s.right_cov, right, moment, 1);
    if (ok) {
      s.left_basis = std::move(left);
      s.right_basis = std::move(right);
      s.exp_avg_sq = std::move(moment);
    }
  }
  if (!ok) {
    // keep stepping in the unrotated basis; the second moment restarts there
    s.rotated = false;
    s.exp_avg_sq.setZero();
    diagnostics_.push_back(
        fmt::format("step {}: eigendecomposition failed for {}; using unrotated updates", step_, name));
  }
}

}  // namespace impedans::optim
