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

// Composite physics-informed loss terms and their adjoints.
//
// Every term that feeds training can also write its adjoint: the derivative of
// the term with respect to each input, using the FieldAdjoint convention
// (dL/dRe in the real part, dL/dIm in the imaginary part). Adjoint outputs are
// accumulated, never overwritten, and each is scaled by a caller-supplied weight
// so that weighted sums can share one buffer.

#include <array>
#include <span>
#include <vector>

#include "neural_field.hpp"
#include "types.hpp"

namespace impedans::losses {

using nf::FieldAdjoint;
using nf::FieldEvaluation;

struct LossConfig {
  double huber_delta = 0.5;
  /// A boundary point is degenerate when |dp/dn| < floor * |k p|.
  double degenerate_floor = 1e-12;

  void validate() const;
};

/// mean |predicted - measured|^2.
double data_loss(std::span<const Complex> predicted, std::span<const Complex> measured);
double data_loss(std::span<const FieldEvaluation> predicted, std::span<const Complex> measured,
                 std::span<FieldAdjoint> adjoint, double weight);

/// Helmholtz residual, mean |lap p + k^2 p|^2 over the evaluations.
double pde_loss(std::span<const FieldEvaluation> evals, double k);
/// Same, for a set split over two spans (volume and sensor points); the mean
/// runs over their union.
double pde_loss(std::span<const FieldEvaluation> first, std::span<const FieldEvaluation> second, double k,
                std::span<FieldAdjoint> first_adjoint, std::span<FieldAdjoint> second_adjoint, double weight);

struct BoundaryImpedance {
  std::vector<Complex> zeta;       // per point; NaN at degenerate points
  std::vector<bool> degenerate;
  std::vector<std::size_t> valid;  // indices of non-degenerate points
  Complex zeta_bar{};              // mean over valid points; NaN when none are valid

  std::size_t degenerate_count() const { return zeta.size() - valid.size(); }
  /// zeta at the valid points only.
  std::vector<Complex> valid_zeta() const;
};

/// zeta(x) = k p / (j dp/dn) at each boundary point, and its mean.
BoundaryImpedance boundary_impedance(std::span<const FieldEvaluation> evals, const Points& normals, double k,
                                     double degenerate_floor = 1e-12);

/// Pulls an adjoint on the per-point zeta (indexed like BoundaryImpedance::zeta;
/// ignored at degenerate points) back onto the boundary evaluations.
void boundary_impedance_adjoint(const BoundaryImpedance& b, std::span<const FieldEvaluation> evals,
                                const Points& normals, std::span<const Complex> zeta_adjoint,
                                std::span<FieldAdjoint> adjoint);

/// Adds the adjoint of a scalar with respect to zeta_bar onto the per-point
/// zeta adjoint of the valid points.
void zeta_bar_adjoint(const BoundaryImpedance& b, Complex bar_adjoint, std::span<Complex> zeta_adjoint);

struct VarianceTerms {
  double var_re = 0.0;
  double var_im = 0.0;
};

/// Population variance of Re zeta and Im zeta.
VarianceTerms variance_losses(std::span<const Complex> zeta);
/// Variance over the valid points of b, accumulating weight_re * d var_re +
/// weight_im * d var_im into the per-point zeta adjoint.
VarianceTerms variance_losses(const BoundaryImpedance& b, double weight_re, double weight_im,
                              std::span<Complex> zeta_adjoint);

double huber(double a, double delta);
double huber_derivative(double a, double delta);

/// Mean over interior bins of Huber(Re d2R) + Huber(Im d2R), where d2R is the
/// second difference of the normal-incidence reflection spectrum.
double smoothness_loss(std::span<const Complex> zeta_bar, double delta);
/// Same, accumulating weight * dL/dzeta_bar into zeta_bar_adjoint.
double smoothness_loss(std::span<const Complex> zeta_bar, double delta, std::span<Complex> zeta_bar_adjoint,
                       double weight);

struct FrequencyTerms {
  double data = 0.0;
  double pde = 0.0;
  double var_re = 0.0;
  double var_im = 0.0;
};

struct LossBreakdown {
  std::vector<FrequencyTerms> per_frequency;
  double smooth = 0.0;
  std::vector<Complex> zeta_bar;
  std::vector<std::size_t> degenerate_points;
};

struct LossWeights {
  std::vector<std::array<double, 4>> per_frequency;  // data, pde, var_re, var_im
  double smooth = 1.0;
};

double total_loss(const LossBreakdown& breakdown, const LossWeights& weights);

}  // namespace impedans::losses
