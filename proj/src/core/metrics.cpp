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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "error.hpp"

namespace impedans::metrics {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DomainError(fmt::format("{}: length mismatch ({} vs {})", what, a, b));
  if (a == 0) throw DomainError(fmt::format("{}: empty input", what));
}

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

void EvaluationSet::validate() const {
  if (points.empty()) throw ValidationError("evaluation set has no points");
  if (reference.size() != frequencies.size()) {
    throw ValidationError(fmt::format("evaluation set has {} pressure rows for {} frequencies", reference.size(),
                                      frequencies.size()));
  }
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i].size() != points.size()) {
      throw ValidationError(fmt::format("evaluation set row {} has {} entries, expected {}", i, reference[i].size(),
                                        points.size()));
    }
  }
}

Points evaluation_points(const field::ArrayGeometry& geometry, const EvaluationSlab& slab, std::uint64_t seed) {
  geometry.validate();
  if (slab.points < 2) throw DomainError(fmt::format("evaluation set needs >= 2 points, got {}", slab.points));
  if (!(slab.height > 0.0)) throw DomainError(fmt::format("evaluation slab height must be > 0, got {}", slab.height));
  const double margin = slab.lateral_margin < 0.0 ? geometry.spacing : slab.lateral_margin;
  const double hx = 0.5 * geometry.footprint_x() + margin;
  const double hy = 0.5 * geometry.footprint_y() + margin;
  // open at the surface so no point sits exactly on the boundary
  const Box box{{-hx, -hy, 1e-6 * slab.height}, {hx, hy, slab.height}};
  Points out;
  for (const Vec3& p : field::latin_hypercube_points(slab.points, box, seed)) out.push_back(geometry.to_world(p));
  return out;
}

double mae_alpha(std::span<const double> predicted, std::span<const double> reference) {
  check_lengths(predicted.size(), reference.size(), "mae_alpha");
  double s = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) s += std::abs(predicted[i] - reference[i]);
  return s / static_cast<double>(predicted.size());
}

double mae_zeta(std::span<const Complex> predicted, std::span<const Complex> reference) {
  check_lengths(predicted.size(), reference.size(), "mae_zeta");
  double s = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const Complex d = predicted[i] - reference[i];
    s += std::abs(d.real()) + std::abs(d.imag());
  }
  return s / (2.0 * static_cast<double>(predicted.size()));
}

double mae_pressure(std::span<const Complex> predicted, std::span<const Complex> reference) {
  check_lengths(predicted.size(), reference.size(), "mae_pressure");
  double s = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const Complex d = predicted[i] - reference[i];
    s += std::abs(d.real()) + std::abs(d.imag());
  }
  return s / static_cast<double>(predicted.size());
}

double field_complexity(std::span<const Complex> pressure) {
  if (pressure.size() < 2) throw DomainError("field complexity needs at least 2 points");
  double re = 0.0, im = 0.0;
  for (std::size_t v = 1; v < pressure.size(); ++v) {
    re += std::abs(pressure[v].real() - pressure[v - 1].real());
    im += std::abs(pressure[v].imag() - pressure[v - 1].imag());
  }
  const double n = static_cast<double>(pressure.size() - 1);
  return std::hypot(re / n, im / n);
}

double field_complexity(const EvaluationSet& set, std::size_t frequency) {
  if (frequency >= set.reference.size()) {
    throw DomainError(fmt::format("frequency index {} out of range ({} rows)", frequency, set.reference.size()));
  }
  return field_complexity(set.reference[frequency]);
}

double spearman(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size(), "spearman");
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

}  // namespace impedans::metrics
