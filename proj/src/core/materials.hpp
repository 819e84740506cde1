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

// Impedance, reflection and absorption of locally reacting surfaces.
//
// Time convention throughout the library is e^{+j omega t}. Under it a lossy
// medium has Im(kc) < 0, the hard-backed layer impedance is
// zeta = -j Zc cot(kc d), and the boundary relation reads
// j zeta dp/dn = k p with n pointing out of the acoustic domain.

#include <string>
#include <variant>
#include <vector>

#include "types.hpp"

namespace impedans::materials {

struct MikiBulk {
  Complex zc;  // characteristic impedance normalized by rho0 c0
  Complex kc;  // complex wavenumber, rad/m
  bool in_validity_range = true;  // 0.01 < f/sigma < 1
};

/// Miki's empirical bulk model. sigma is the flow resistivity in Pa s m^-2.
MikiBulk miki_bulk(double frequency_hz, double sigma, const AcousticMedium& medium = {});

/// Normalized surface impedance of a hard-backed Miki layer of the given thickness.
Complex porous_surface_impedance(double frequency_hz, double sigma, double thickness,
                                 const AcousticMedium& medium = {});

/// R = (zeta cos(theta) - 1) / (zeta cos(theta) + 1).
Complex reflection_from_impedance(Complex zeta, double theta_inc = 0.0);

/// Normal-incidence inverse of reflection_from_impedance.
Complex impedance_from_reflection(Complex reflection);

/// 1 - |R|^2 at the given incidence angle.
double absorption_at_angle(Complex zeta, double theta_inc = 0.0);

/// Random-incidence absorption of a locally reacting surface (closed form).
/// Requires Re(zeta) > 0. Im(zeta) = 0 is handled through the analytic limit.
double paris_random_absorption(Complex zeta);

struct ConstantImpedance {
  Complex zeta;
};

struct MikiPorousLayer {
  double sigma = 39260.0;
  double thickness = 0.04;
};

/// Locally reacting boundary model; validated on construction.
class MaterialSpec {
 public:
  using Variant = std::variant<ConstantImpedance, MikiPorousLayer>;

  explicit MaterialSpec(ConstantImpedance c);
  explicit MaterialSpec(MikiPorousLayer layer);

  static MaterialSpec constant(Complex zeta) { return MaterialSpec(ConstantImpedance{zeta}); }
  static MaterialSpec porous(double sigma, double thickness) {
    return MaterialSpec(MikiPorousLayer{sigma, thickness});
  }

  /// Surface impedance at a frequency; locally reacting, so angle independent.
  Complex impedance(double frequency_hz, const AcousticMedium& medium = {}) const;

  const Variant& variant() const { return variant_; }
  std::string describe() const;

 private:
  Variant variant_;
};

struct ImpedanceSpectrum {
  std::vector<double> frequencies;
  std::vector<Complex> zeta;
  std::vector<double> alpha;
};

/// Tabulates zeta and absorption at theta_inc for a frequency grid.
ImpedanceSpectrum tabulate(const MaterialSpec& material, const std::vector<double>& frequencies,
                           const AcousticMedium& medium = {}, double theta_inc = 0.0);

}  // namespace impedans::materials
