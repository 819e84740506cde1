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

#include "losses.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "error.hpp"
#include "materials.hpp"

namespace impedans::losses {

void LossConfig::validate() const {
  if (!(huber_delta > 0.0)) throw DomainError(fmt::format("huber delta must be > 0, got {}", huber_delta));
  if (!(degenerate_floor >= 0.0)) {
    throw DomainError(fmt::format("degenerate floor must be >= 0, got {}", degenerate_floor));
  }
}

double data_loss(std::span<const Complex> predicted, std::span<const Complex> measured) {
  if (predicted.empty()) throw DomainError("data loss needs at least one sensor");
  if (predicted.size() != measured.size()) {
    throw DomainError(fmt::format("data loss: {} predictions for {} measurements", predicted.size(), measured.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::norm(predicted[i] - measured[i]);
  return sum / static_cast<double>(predicted.size());
}

double data_loss(std::span<const FieldEvaluation> predicted, std::span<const Complex> measured,
                 std::span<FieldAdjoint> adjoint, double weight) {
  if (predicted.empty()) throw DomainError("data loss needs at least one sensor");
  if (predicted.size() != measured.size() || adjoint.size() != predicted.size()) {
    throw DomainError(fmt::format("data loss: {} predictions for {} measurements", predicted.size(), measured.size()));
  }
  const double n = static_cast<double>(predicted.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const Complex r = predicted[i].value - measured[i];
    sum += std::norm(r);
    adjoint[i].value += (2.0 * weight / n) * r;
  }
  return sum / n;
}

double pde_loss(std::span<const FieldEvaluation> evals, double k) {
  if (evals.empty()) throw DomainError("pde loss needs at least one point");
  double sum = 0.0;
  for (const FieldEvaluation& e : evals) sum += std::norm(e.laplacian() + k * k * e.value);
  return sum / static_cast<double>(evals.size());
}

double pde_loss(std::span<const FieldEvaluation> first, std::span<const FieldEvaluation> second, double k,
                std::span<FieldAdjoint> first_adjoint, std::span<FieldAdjoint> second_adjoint, double weight) {
  const std::size_t total = first.size() + second.size();
  if (total == 0) throw DomainError("pde loss needs at least one point");
  if (first_adjoint.size() != first.size() || second_adjoint.size() != second.size()) {
    throw DomainError("pde loss: adjoint size mismatch");
  }
  const double n = static_cast<double>(total);
  const double k2 = k * k;
  double sum = 0.0;
  auto run = [&](std::span<const FieldEvaluation> evals, std::span<FieldAdjoint> adj) {
    for (std::size_t i = 0; i < evals.size(); ++i) {
      const Complex r = evals[i].laplacian() + k2 * evals[i].value;
      sum += std::norm(r);
      const Complex rb = (2.0 * weight / n) * r;
      adj[i].value += k2 * rb;
      for (int d = 0; d < 3; ++d) adj[i].second_diag[d] += rb;
    }
  };
  run(first, first_adjoint);
  run(second, second_adjoint);
  return sum / n;
}

std::vector<Complex> BoundaryImpedance::valid_zeta() const {
  std::vector<Complex> out;
  out.reserve(valid.size());
  for (std::size_t i : valid) out.push_back(zeta[i]);
  return out;
}

BoundaryImpedance boundary_impedance(std::span<const FieldEvaluation> evals, const Points& normals, double k,
                                     double degenerate_floor) {
  if (normals.size() != evals.size()) {
    throw DomainError(fmt::format("boundary impedance: {} normals for {} points", normals.size(), evals.size()));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  BoundaryImpedance b;
  b.zeta.assign(evals.size(), Complex(nan, nan));
  b.degenerate.assign(evals.size(), true);
  Complex sum{};
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (std::abs(norm(normals[i]) - 1.0) > 1e-9) {
      throw DomainError(fmt::format("boundary normal {} is not unit length", i));
    }
    const Complex g = evals[i].normal_derivative(normals[i]);
    const double mag = std::abs(g);
    if (!(mag > degenerate_floor * std::abs(k * evals[i].value)) || mag == 0.0) continue;
    b.zeta[i] = k * evals[i].value / (kJ * g);
    b.degenerate[i] = false;
    b.valid.push_back(i);
    sum += b.zeta[i];
  }
  b.zeta_bar = b.valid.empty() ? Complex(nan, nan) : sum / static_cast<double>(b.valid.size());
  return b;
}

void boundary_impedance_adjoint(const BoundaryImpedance& b, std::span<const FieldEvaluation> evals,
                                const Points& normals, std::span<const Complex> zeta_adjoint,
                                std::span<FieldAdjoint> adjoint) {
  for (std::size_t i : b.valid) {
    const Complex w = zeta_adjoint[i];
    if (w == Complex{}) continue;
    const Complex g = evals[i].normal_derivative(normals[i]);
    // zeta is holomorphic in (p, g): dzeta/dp = zeta / p, dzeta/dg = -zeta / g
    const Complex dp = b.zeta[i] / evals[i].value;
    const Complex dg = -b.zeta[i] / g;
    adjoint[i].value += w * std::conj(dp);
    const Complex gb = w * std::conj(dg);
    for (int d = 0; d < 3; ++d) adjoint[i].gradient[d] += normals[i][d] * gb;
  }
}

void zeta_bar_adjoint(const BoundaryImpedance& b, Complex bar_adjoint, std::span<Complex> zeta_adjoint) {
  if (b.valid.empty()) return;
  const Complex share = bar_adjoint / static_cast<double>(b.valid.size());
  for (std::size_t i : b.valid) zeta_adjoint[i] += share;
}

namespace {

struct Moments {
  double mean_re = 0.0, mean_im = 0.0, var_re = 0.0, var_im = 0.0;
};

template <class Get>
Moments moments(std::size_t n, Get get) {
  if (n < 2) throw DomainError(fmt::format("variance needs at least 2 valid boundary points, got {}", n));
  Moments m;
  for (std::size_t i = 0; i < n; ++i) {
    m.mean_re += get(i).real();
    m.mean_im += get(i).imag();
  }
  m.mean_re /= static_cast<double>(n);
  m.mean_im /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = get(i).real() - m.mean_re;
    const double c = get(i).imag() - m.mean_im;
    m.var_re += a * a;
    m.var_im += c * c;
  }
  m.var_re /= static_cast<double>(n);
  m.var_im /= static_cast<double>(n);
  return m;
}

}  // namespace

VarianceTerms variance_losses(std::span<const Complex> zeta) {
  const Moments m = moments(zeta.size(), [&](std::size_t i) { return zeta[i]; });
  return {m.var_re, m.var_im};
}

VarianceTerms variance_losses(const BoundaryImpedance& b, double weight_re, double weight_im,
                              std::span<Complex> zeta_adjoint) {
  const Moments m = moments(b.valid.size(), [&](std::size_t i) { return b.zeta[b.valid[i]]; });
  const double scale = 2.0 / static_cast<double>(b.valid.size());
  for (std::size_t i : b.valid) {
    zeta_adjoint[i] += Complex(weight_re * scale * (b.zeta[i].real() - m.mean_re),
                               weight_im * scale * (b.zeta[i].imag() - m.mean_im));
  }
  return {m.var_re, m.var_im};
}

double huber(double a, double delta) {
  const double t = std::abs(a);
  return t <= delta ? 0.5 * a * a : delta * (t - 0.5 * delta);
}

double huber_derivative(double a, double delta) {
  if (std::abs(a) <= delta) return a;
  return a > 0.0 ? delta : -delta;
}

double smoothness_loss(std::span<const Complex> zeta_bar, double delta) {
  std::vector<Complex> scratch(zeta_bar.size());
  return smoothness_loss(zeta_bar, delta, scratch, 0.0);
}

double smoothness_loss(std::span<const Complex> zeta_bar, double delta, std::span<Complex> zeta_bar_adjoint,
                       double weight) {
  const std::size_t n = zeta_bar.size();
  if (n < 3) throw DomainError(fmt::format("smoothness loss needs at least 3 frequencies, got {}", n));
  if (!(delta > 0.0)) throw DomainError(fmt::format("huber delta must be > 0, got {}", delta));
  std::vector<Complex> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (zeta_bar[i] == Complex(-1.0, 0.0)) {
      throw NumericError(fmt::format("smoothness loss: reflection pole at bin {} (zeta = -1)", i));
    }
    r[i] = materials::reflection_from_impedance(zeta_bar[i]);
  }
  const double interior = static_cast<double>(n - 2);
  double sum = 0.0;
  std::vector<Complex> r_bar(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Complex d2 = r[i + 1] - 2.0 * r[i] + r[i - 1];
    sum += huber(d2.real(), delta) + huber(d2.imag(), delta);
    const Complex db = (weight / interior) * Complex(huber_derivative(d2.real(), delta),
                                                     huber_derivative(d2.imag(), delta));
    r_bar[i - 1] += db;
    r_bar[i] -= 2.0 * db;
    r_bar[i + 1] += db;
  }
  if (weight != 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex dr = 2.0 / ((zeta_bar[i] + 1.0) * (zeta_bar[i] + 1.0));
      zeta_bar_adjoint[i] += r_bar[i] * std::conj(dr);
    }
  }
  return sum / interior;
}

double total_loss(const LossBreakdown& breakdown, const LossWeights& weights) {
  if (weights.per_frequency.size() != breakdown.per_frequency.size()) {
    throw DomainError("total loss: weight and term counts differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < breakdown.per_frequency.size(); ++i) {
    const FrequencyTerms& t = breakdown.per_frequency[i];
    const auto& w = weights.per_frequency[i];
    sum += w[0] * t.data + w[1] * t.pde + w[2] * t.var_re + w[3] * t.var_im;
  }
  return sum + weights.smooth * breakdown.smooth;
}

}  // namespace impedans::losses
