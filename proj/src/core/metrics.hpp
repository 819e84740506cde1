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

// Error metrics for recovered impedance spectra and reconstructed fields, and
// the sound-field complexity measure.

#include <span>
#include <vector>

#include "field_oracle.hpp"
#include "types.hpp"

namespace impedans::metrics {

/// Points in generation order and the reference pressure on them.
struct EvaluationSet {
  Points points;                           // world coordinates
  field::PressureMatrix reference;         // [frequency x point]
  std::vector<double> frequencies;

  void validate() const;
};

struct EvaluationSlab {
  int points = 2000;
  double height = 0.020;           // m above the surface
  double lateral_margin = -1.0;    // m beyond the footprint; negative means one array spacing
};

/// Latin-hypercube points over the slab above the array footprint, in
/// generation order, in world coordinates.
Points evaluation_points(const field::ArrayGeometry& geometry, const EvaluationSlab& slab, std::uint64_t seed);

/// Mean of |a_i - b_i|.
double mae_alpha(std::span<const double> predicted, std::span<const double> reference);

/// Mean over frequencies of (|Re d| + |Im d|) / 2.
double mae_zeta(std::span<const Complex> predicted, std::span<const Complex> reference);

/// Mean over points of |Re d| + |Im d|.
double mae_pressure(std::span<const Complex> predicted, std::span<const Complex> reference);

/// Euclidean combination of the mean absolute forward differences of the
/// real and imaginary parts along the point order.
double field_complexity(std::span<const Complex> pressure);
double field_complexity(const EvaluationSet& set, std::size_t frequency);

/// Spearman rank correlation with average ranks for ties. NaN when either
/// input is constant.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace impedans::metrics
