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

#include "materials.hpp"

#include <fmt/format.h>

#include "error.hpp"

namespace impedans::materials {

MikiBulk miki_bulk(double frequency_hz, double sigma, const AcousticMedium& medium) {
  if (!(frequency_hz > 0.0)) throw DomainError(fmt::format("miki_bulk: frequency must be > 0, got {}", frequency_hz));
  if (!(sigma > 0.0)) throw DomainError(fmt::format("miki_bulk: flow resistivity must be > 0, got {}", sigma));

  const double x = 1.0e3 * frequency_hz / sigma;
  const double az = std::pow(x, -0.632);
  const double ak = std::pow(x, -0.618);
  const double k = medium.wavenumber(frequency_hz);

  MikiBulk out;
  out.zc = Complex(1.0 + 5.50 * az, -8.43 * az);
  out.kc = k * Complex(1.0 + 7.81 * ak, -11.41 * ak);
  const double ratio = frequency_hz / sigma;
  out.in_validity_range = ratio > 0.01 && ratio < 1.0;
  return out;
}

Complex porous_surface_impedance(double frequency_hz, double sigma, double thickness,
                                 const AcousticMedium& medium) {
  if (!(thickness > 0.0)) throw DomainError(fmt::format("porous layer thickness must be > 0, got {}", thickness));
  const MikiBulk bulk = miki_bulk(frequency_hz, sigma, medium);
  const Complex arg = bulk.kc * thickness;
  // For large lossy arguments sin/cos overflow; cot(arg) tends to +j there.
  Complex cot;
  if (arg.imag() < -350.0) {
    cot = kJ;
  } else {
    const Complex s = std::sin(arg);
    if (std::abs(s) == 0.0) throw NumericError("porous_surface_impedance: cot singularity (sin(kc d) = 0)");
    cot = std::cos(arg) / s;
  }
  const Complex zeta = -kJ * bulk.zc * cot;
  if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag())) {
    throw NumericError("porous_surface_impedance: non-finite impedance");
  }
  return zeta;
}

Complex reflection_from_impedance(Complex zeta, double theta_inc) {
  if (!(theta_inc >= 0.0 && theta_inc < kPi / 2)) {
    throw DomainError(fmt::format("incidence angle must be in [0, pi/2), got {}", theta_inc));
  }
  if (std::isinf(zeta.real()) || std::isinf(zeta.imag())) return Complex(1.0, 0.0);
  const Complex zc = zeta * std::cos(theta_inc);
  const Complex den = zc + 1.0;
  if (std::abs(den) == 0.0) throw NumericError("reflection_from_impedance: pole at zeta cos(theta) = -1");
  return (zc - 1.0) / den;
}

Complex impedance_from_reflection(Complex reflection) {
  const Complex den = 1.0 - reflection;
  if (std::abs(den) == 0.0) throw NumericError("impedance_from_reflection: R = 1 has infinite impedance");
  return (1.0 + reflection) / den;
}

double absorption_at_angle(Complex zeta, double theta_inc) {
  return 1.0 - std::norm(reflection_from_impedance(zeta, theta_inc));
}

double paris_random_absorption(Complex zeta) {
  const double r = zeta.real();
  const double x = zeta.imag();
  if (!(r > 0.0)) throw DomainError(fmt::format("paris_random_absorption: Re(zeta) must be > 0, got {}", r));
  if (std::isinf(r) || std::isinf(x)) return 0.0;

  const double m2 = r * r + x * x;
  // arctan(x/(r+1))/x, continuous through x = 0.
  double atan_over_x;
  const double t = x / (r + 1.0);
  if (std::abs(t) < 1e-8) {
    atan_over_x = (1.0 - t * t / 3.0) / (r + 1.0);
  } else {
    atan_over_x = std::atan(t) / x;
  }
  const double bracket = 1.0 - (r / m2) * std::log((r + 1.0) * (r + 1.0) + x * x) +
                         ((r * r - x * x) / m2) * atan_over_x;
  return 8.0 * r / m2 * bracket;
}

MaterialSpec::MaterialSpec(ConstantImpedance c) : variant_(c) {
  if (!(c.zeta.real() >= 0.0) || !std::isfinite(c.zeta.imag())) {
    throw DomainError(fmt::format("constant impedance needs Re(zeta) >= 0, got {}{:+}j", c.zeta.real(), c.zeta.imag()));
  }
}

MaterialSpec::MaterialSpec(MikiPorousLayer layer) : variant_(layer) {
  if (!(layer.sigma > 0.0)) throw DomainError(fmt::format("porous layer: sigma must be > 0, got {}", layer.sigma));
  if (!(layer.thickness > 0.0)) {
    throw DomainError(fmt::format("porous layer: thickness must be > 0, got {}", layer.thickness));
  }
}

Complex MaterialSpec::impedance(double frequency_hz, const AcousticMedium& medium) const {
  struct Visitor {
    double f;
    const AcousticMedium& medium;
    Complex operator()(const ConstantImpedance& c) const { return c.zeta; }
    Complex operator()(const MikiPorousLayer& p) const {
      return porous_surface_impedance(f, p.sigma, p.thickness, medium);
    }
  };
  return std::visit(Visitor{frequency_hz, medium}, variant_);
}

std::string MaterialSpec::describe() const {
  if (const auto* c = std::get_if<ConstantImpedance>(&variant_)) {
    return fmt::format("constant zeta={}{:+}j", c->zeta.real(), c->zeta.imag());
  }
  const auto& p = std::get<MikiPorousLayer>(variant_);
  return fmt::format("miki porous layer sigma={} thickness={}", p.sigma, p.thickness);
}

ImpedanceSpectrum tabulate(const MaterialSpec& material, const std::vector<double>& frequencies,
                           const AcousticMedium& medium, double theta_inc) {
  ImpedanceSpectrum out;
  out.frequencies = frequencies;
  out.zeta.reserve(frequencies.size());
  out.alpha.reserve(frequencies.size());
  for (double f : frequencies) {
    const Complex z = material.impedance(f, medium);
    out.zeta.push_back(z);
    out.alpha.push_back(absorption_at_angle(z, theta_inc));
  }
  return out;
}

}  // namespace impedans::materials
