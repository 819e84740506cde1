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

// Analytic pressure fields above a locally reacting plane and the point sets
// used to sample them.
//
// Local frame: surface at z = 0, acoustic domain z > 0, the outward normal
// (out of the sound field, into the material) is -z. ArrayGeometry maps the
// local frame onto world coordinates through its center and surface normal.

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "materials.hpp"
#include "types.hpp"

namespace impedans::field {

/// Complex pressures, one row per frequency, one column per point.
using PressureMatrix = std::vector<std::vector<Complex>>;

struct ArrayGeometry {
  int nx = 4;
  int ny = 4;
  double spacing = 0.025;
  double d1 = 0.020;
  double d2 = 0.030;
  Vec3 center{};                    // point on the surface beneath the array center
  Vec3 surface_normal{0.0, 0.0, -1.0};  // unit, pointing into the material

  void validate() const;

  int sensors_per_layer() const { return nx * ny; }
  double footprint_x() const { return (nx - 1) * spacing; }
  double footprint_y() const { return (ny - 1) * spacing; }

  /// Orthonormal local axes (t1, t2, up) with up = -surface_normal.
  std::array<Vec3, 3> frame() const;
  Vec3 to_world(Vec3 local) const;
  Vec3 to_local(Vec3 world) const;
};

struct TwoLayerArray {
  ArrayGeometry geometry;
  Points sensors;  // layer at d1 first, then layer at d1 + d2; row-major (y outer, x inner)
};

TwoLayerArray build_two_layer_array(int nx, int ny, double spacing, double d1, double d2,
                                    Vec3 center = {}, Vec3 surface_normal = {0.0, 0.0, -1.0});

struct DomainConfig {
  int volume_points = 512;
  int boundary_grid = 8;         // boundary points per lateral axis
  double lateral_margin = -1.0;  // m beyond the footprint; negative means one array spacing
  double ceiling_margin = 0.010; // m above the top sensor layer
};

struct SamplingDomain {
  Points s_b;      // boundary points on the surface plane
  Points s_v;      // volumetric collocation points
  Points s_s;      // sensor points
  Points normals;  // outward normal at each s_b point
  Box box;         // world-space bounds used for coordinate normalization
};

/// Assembles S_b (regular grid over the footprint), S_v (Latin hypercube) and S_s.
SamplingDomain build_sampling_domain(const ArrayGeometry& geometry, const Points& sensors,
                                     const DomainConfig& config, std::uint64_t seed);

/// Local-frame box holding the volumetric collocation points.
Box collocation_box_local(const ArrayGeometry& geometry, const DomainConfig& config);

/// n stratified samples in box; emission order is the generation index.
Points latin_hypercube_points(int n, const Box& box, std::uint64_t seed);

/// One incident plane wave and its specular reflection. Points are in the local frame.
PressureMatrix plane_wave_over_impedance(const materials::MaterialSpec& material, double theta_inc,
                                         double azimuth, const std::vector<double>& frequencies,
                                         const Points& local_points, const AcousticMedium& medium = {});

struct PlaneWaveComponent {
  double theta_inc = 0.0;
  double azimuth = 0.0;
  Complex amplitude{1.0, 0.0};
};

/// Superposed plane-wave pairs; produces interference patterns with nodal lines.
PressureMatrix plane_wave_superposition(const materials::MaterialSpec& material,
                                        const std::vector<PlaneWaveComponent>& waves,
                                        const std::vector<double>& frequencies, const Points& local_points,
                                        const AcousticMedium& medium = {});

/// Monopole plus image source; the image is weighted by the plane-wave
/// reflection coefficient at the specular angle (an approximation for finite
/// source distances). strength is the free-field pressure amplitude at 1 m.
PressureMatrix point_source_over_impedance(Vec3 source_local, double strength,
                                           const materials::MaterialSpec& material,
                                           const std::vector<double>& frequencies, const Points& local_points,
                                           const AcousticMedium& medium = {});

struct NoiseMeta {
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

struct PressureDataset {
  AcousticMedium medium;
  std::vector<double> frequencies;
  Points sensors;            // world coordinates
  PressureMatrix pressure;   // [frequency][sensor], Pa
  std::optional<NoiseMeta> noise;
  ArrayGeometry geometry;
  nlohmann::json provenance = nlohmann::json::object();

  void validate() const;
};

/// Complex Gaussian noise with per-frequency std = rms|p| 10^(-snr/20), split
/// equally between real and imaginary parts. snr = +inf returns the input.
PressureDataset add_complex_noise(const PressureDataset& dataset, double snr_db, std::uint64_t seed);

}  // namespace impedans::field
