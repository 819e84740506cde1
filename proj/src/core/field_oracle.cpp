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

#include "field_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "error.hpp"

namespace impedans::field {

void ArrayGeometry::validate() const {
  if (nx < 2 || ny < 2) throw DomainError(fmt::format("array grid must be at least 2x2, got {}x{}", nx, ny));
  if (!(spacing > 0.0)) throw DomainError(fmt::format("array spacing must be > 0, got {}", spacing));
  if (!(d1 > 0.0)) throw DomainError(fmt::format("d1 must be > 0, got {}", d1));
  if (!(d2 > 0.0)) throw DomainError(fmt::format("d2 must be > 0, got {}", d2));
  if (std::abs(norm(surface_normal) - 1.0) > 1e-9) {
    throw DomainError(fmt::format("surface normal must be unit length, |n| = {}", norm(surface_normal)));
  }
}

std::array<Vec3, 3> ArrayGeometry::frame() const {
  const Vec3 up = -1.0 * surface_normal;
  Vec3 seed{1.0, 0.0, 0.0};
  if (std::abs(dot(seed, up)) > 0.9) seed = {0.0, 1.0, 0.0};
  Vec3 t1 = seed - dot(seed, up) * up;
  t1 = (1.0 / norm(t1)) * t1;
  const Vec3 t2 = cross(up, t1);
  return {t1, t2, up};
}

Vec3 ArrayGeometry::to_world(Vec3 local) const {
  const auto [t1, t2, up] = frame();
  return center + local.x * t1 + local.y * t2 + local.z * up;
}

Vec3 ArrayGeometry::to_local(Vec3 world) const {
  const auto [t1, t2, up] = frame();
  const Vec3 rel = world - center;
  return {dot(rel, t1), dot(rel, t2), dot(rel, up)};
}

TwoLayerArray build_two_layer_array(int nx, int ny, double spacing, double d1, double d2, Vec3 center,
                                    Vec3 surface_normal) {
  TwoLayerArray out;
  out.geometry = ArrayGeometry{nx, ny, spacing, d1, d2, center, surface_normal};
  out.geometry.validate();
  out.sensors.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (const double height : {d1, d1 + d2}) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const Vec3 local{(ix - 0.5 * (nx - 1)) * spacing, (iy - 0.5 * (ny - 1)) * spacing, height};
        out.sensors.push_back(out.geometry.to_world(local));
      }
    }
  }
  return out;
}

Box collocation_box_local(const ArrayGeometry& geometry, const DomainConfig& config) {
  const double margin = config.lateral_margin < 0.0 ? geometry.spacing : config.lateral_margin;
  const double hx = 0.5 * geometry.footprint_x() + margin;
  const double hy = 0.5 * geometry.footprint_y() + margin;
  return Box{{-hx, -hy, 0.0}, {hx, hy, geometry.d1 + geometry.d2 + config.ceiling_margin}};
}

Points latin_hypercube_points(int n, const Box& box, std::uint64_t seed) {
  if (n < 1) throw DomainError(fmt::format("latin hypercube needs n >= 1, got {}", n));
  for (int a = 0; a < 3; ++a) {
    if (!(box.hi[a] > box.lo[a])) throw DomainError("latin hypercube box is degenerate");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<std::vector<int>, 3> strata;
  for (auto& perm : strata) {
    perm.resize(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  Points out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) {
      double u = unit(rng);
      while (u == 0.0) u = unit(rng);  // keep samples off the lower face
      const double t = (strata[a][static_cast<std::size_t>(i)] + u) / n;
      out[static_cast<std::size_t>(i)][a] = box.lo[a] + t * (box.hi[a] - box.lo[a]);
    }
  }
  return out;
}

SamplingDomain build_sampling_domain(const ArrayGeometry& geometry, const Points& sensors,
                                     const DomainConfig& config, std::uint64_t seed) {
  geometry.validate();
  if (config.boundary_grid < 2) throw DomainError("boundary grid needs at least 2 points per axis");
  if (config.volume_points < 1) throw DomainError("volume point count must be >= 1");

  SamplingDomain d;
  d.s_s = sensors;

  const int nb = config.boundary_grid;
  const double hx = 0.5 * geometry.footprint_x();
  const double hy = 0.5 * geometry.footprint_y();
  for (int iy = 0; iy < nb; ++iy) {
    for (int ix = 0; ix < nb; ++ix) {
      const Vec3 local{-hx + 2.0 * hx * ix / (nb - 1), -hy + 2.0 * hy * iy / (nb - 1), 0.0};
      d.s_b.push_back(geometry.to_world(local));
      d.normals.push_back(geometry.surface_normal);
    }
  }

  const Box local_box = collocation_box_local(geometry, config);
  for (const Vec3& p : latin_hypercube_points(config.volume_points, local_box, seed)) {
    d.s_v.push_back(geometry.to_world(p));
  }

  // World bounds of the local box corners; sensors always fall inside.
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};
  for (int c = 0; c < 8; ++c) {
    const Vec3 corner{(c & 1) ? local_box.hi.x : local_box.lo.x, (c & 2) ? local_box.hi.y : local_box.lo.y,
                      (c & 4) ? local_box.hi.z : local_box.lo.z};
    const Vec3 w = geometry.to_world(corner);
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], w[a]);
      hi[a] = std::max(hi[a], w[a]);
    }
  }
  d.box = Box{lo, hi};
  return d;
}

PressureMatrix plane_wave_superposition(const materials::MaterialSpec& material,
                                        const std::vector<PlaneWaveComponent>& waves,
                                        const std::vector<double>& frequencies, const Points& local_points,
                                        const AcousticMedium& medium) {
  PressureMatrix out(frequencies.size(), std::vector<Complex>(local_points.size(), Complex{}));
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const double k = medium.wavenumber(frequencies[i]);
    const Complex zeta = material.impedance(frequencies[i], medium);
    for (const PlaneWaveComponent& w : waves) {
      const Complex r = materials::reflection_from_impedance(zeta, w.theta_inc);
      const double kz = k * std::cos(w.theta_inc);
      const double kt = k * std::sin(w.theta_inc);
      const double kx = kt * std::cos(w.azimuth);
      const double ky = kt * std::sin(w.azimuth);
      for (std::size_t m = 0; m < local_points.size(); ++m) {
        const Vec3 p = local_points[m];
        const Complex lateral = std::exp(-kJ * (kx * p.x + ky * p.y));
        out[i][m] += w.amplitude * lateral * (std::exp(kJ * kz * p.z) + r * std::exp(-kJ * kz * p.z));
      }
    }
  }
  return out;
}

PressureMatrix plane_wave_over_impedance(const materials::MaterialSpec& material, double theta_inc,
                                         double azimuth, const std::vector<double>& frequencies,
                                         const Points& local_points, const AcousticMedium& medium) {
  return plane_wave_superposition(material, {PlaneWaveComponent{theta_inc, azimuth, {1.0, 0.0}}}, frequencies,
                                  local_points, medium);
}

PressureMatrix point_source_over_impedance(Vec3 source_local, double strength,
                                           const materials::MaterialSpec& material,
                                           const std::vector<double>& frequencies, const Points& local_points,
                                           const AcousticMedium& medium) {
  if (!(source_local.z > 0.0)) throw DomainError("point source must lie inside the acoustic domain (z > 0)");
  const Vec3 image{source_local.x, source_local.y, -source_local.z};
  PressureMatrix out(frequencies.size(), std::vector<Complex>(local_points.size()));
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const double k = medium.wavenumber(frequencies[i]);
    const Complex zeta = material.impedance(frequencies[i], medium);
    for (std::size_t m = 0; m < local_points.size(); ++m) {
      const Vec3 p = local_points[m];
      const double r = norm(p - source_local);
      const double ri = norm(p - image);
      if (r == 0.0 || ri == 0.0) {
        throw NumericError(fmt::format("point source field is singular at point {}", m));
      }
      const double cos_spec = std::clamp((p.z + source_local.z) / ri, 0.0, 1.0);
      const Complex refl = materials::reflection_from_impedance(zeta, std::acos(cos_spec));
      out[i][m] = strength * (std::exp(-kJ * k * r) / r + refl * std::exp(-kJ * k * ri) / ri);
    }
  }
  return out;
}

void PressureDataset::validate() const {
  if (frequencies.empty()) throw ValidationError("dataset has no frequencies");
  if (sensors.empty()) throw ValidationError("dataset has no sensors");
  if (pressure.size() != frequencies.size()) {
    throw ValidationError(fmt::format("pressure has {} rows, expected {} (one per frequency)", pressure.size(),
                                      frequencies.size()));
  }
  for (std::size_t i = 0; i < pressure.size(); ++i) {
    if (pressure[i].size() != sensors.size()) {
      throw ValidationError(fmt::format("pressure row {} has {} entries, expected {}", i, pressure[i].size(),
                                        sensors.size()));
    }
    for (const Complex& p : pressure[i]) {
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
        throw ValidationError(fmt::format("pressure row {} contains a non-finite value", i));
      }
    }
  }
  for (double f : frequencies) {
    if (!(f > 0.0) || !std::isfinite(f)) throw ValidationError(fmt::format("invalid frequency {}", f));
  }
  if (!(medium.rho0 > 0.0) || !(medium.c0 > 0.0)) throw ValidationError("medium constants must be positive");
}

PressureDataset add_complex_noise(const PressureDataset& dataset, double snr_db, std::uint64_t seed) {
  PressureDataset out = dataset;
  if (std::isinf(snr_db) && snr_db > 0.0) return out;
  if (std::isnan(snr_db)) throw DomainError("snr must not be NaN");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double ratio = std::pow(10.0, -snr_db / 20.0);
  for (auto& row : out.pressure) {
    double power = 0.0;
    for (const Complex& p : row) power += std::norm(p);
    const double rms = std::sqrt(power / static_cast<double>(row.size()));
    const double per_component = rms * ratio / std::sqrt(2.0);
    for (Complex& p : row) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      p += per_component * Complex(re, im);
    }
  }
  out.noise = NoiseMeta{snr_db, seed};
  return out;
}

}  // namespace impedans::field
