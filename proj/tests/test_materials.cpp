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

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "error.hpp"
#include "materials.hpp"

using namespace impedans;
using namespace impedans::materials;

namespace {

// Angular integration of the oblique-incidence absorption, 2 int alpha cos sin.
double quadrature_random_absorption(Complex zeta) {
  auto integrand = [&](double t) {
    const Complex r = (zeta * std::cos(t) - 1.0) / (zeta * std::cos(t) + 1.0);
    return 2.0 * (1.0 - std::norm(r)) * std::cos(t) * std::sin(t);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, kPi / 2, 15, 1e-14);
}

bool close(Complex a, Complex b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("miki bulk values") {
  // reference values from an independent 40-digit evaluation of the closed form
  const MikiBulk a = miki_bulk(1000.0, 39260.0);
  CHECK(close(a.zc, {1.7107866726075235, -1.0894421181966224}, 1e-13));
  CHECK(close(a.kc, {37.642681957370656, -28.24746739810153}, 1e-13));
  CHECK(a.in_validity_range);
  const MikiBulk b = miki_bulk(100.0, 39260.0);
  CHECK(close(b.zc, {4.0460657686417345, -4.6687880781181495}, 1e-13));
  CHECK(close(b.kc, {9.8539148337725458, -11.7214007910246}, 1e-13));
  CHECK_FALSE(b.in_validity_range);
  CHECK_THROWS_AS(miki_bulk(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(miki_bulk(100.0, -1.0), DomainError);
}

TEST_CASE("miki rigid-frame limit and monotonicity") {
  const AcousticMedium air;
  const MikiBulk m = miki_bulk(500.0, 1e-3);
  CHECK(std::abs(m.zc - 1.0) < 1e-3);
  CHECK(std::abs(m.kc - air.wavenumber(500.0)) < 1e-3 * air.wavenumber(500.0));
  double prev = std::numeric_limits<double>::infinity();
  for (double ratio = 0.011; ratio < 1.0; ratio *= 1.1) {
    const MikiBulk b = miki_bulk(ratio * 20000.0, 20000.0);
    CHECK(b.zc.imag() < 0.0);
    CHECK(b.kc.imag() < 0.0);
    CHECK(std::abs(b.zc - 1.0) < prev);
    prev = std::abs(b.zc - 1.0);
  }
}

TEST_CASE("hard-backed layer impedance") {
  CHECK(close(porous_surface_impedance(1000.0, 39260.0, 0.04), {1.3651940998507624, -0.9228663941085419}, 1e-12));
  const MikiBulk bulk = miki_bulk(1000.0, 39260.0);
  CHECK(close(porous_surface_impedance(1000.0, 39260.0, 5.0), bulk.zc, 1e-12));
  CHECK(std::abs(porous_surface_impedance(1000.0, 39260.0, 1e-7)) > 1e4);
  CHECK_THROWS_AS(porous_surface_impedance(1000.0, 39260.0, 0.0), DomainError);
}

TEST_CASE("reflection and absorption fixtures") {
  CHECK(std::abs(reflection_from_impedance(1.0) - 0.0) == 0.0);
  CHECK(std::abs(reflection_from_impedance(Complex(2.0, 1.0)) - Complex(0.4, 0.2)) < 1e-15);
  CHECK(std::abs(reflection_from_impedance(1e14) - 1.0) < 1e-13);
  CHECK(absorption_at_angle(1.0) == 1.0);
  CHECK(absorption_at_angle(2.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(absorption_at_angle(2.0, kPi / 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(reflection_from_impedance(-1.0), NumericError);
  CHECK_THROWS_AS(reflection_from_impedance(2.0, kPi / 2), DomainError);
  CHECK_THROWS_AS(absorption_at_angle(Complex(-1.0, 0.0)), NumericError);
}

TEST_CASE("reflection round trip and passivity") {
  for (double r : {0.0, 0.1, 1.0, 3.0, 40.0}) {
    for (double x : {-20.0, -1.0, 0.0, 0.5, 7.0}) {
      const Complex zeta(r, x);
      const Complex refl = reflection_from_impedance(zeta);
      if (std::abs(refl) < 1.0) CHECK(close(impedance_from_reflection(refl), zeta, 1e-12));
      for (double t = 0.0; t < kPi / 2; t += 0.05) CHECK(std::abs(reflection_from_impedance(zeta, t)) <= 1.0 + 1e-15);
    }
  }
  CHECK_THROWS_AS(impedance_from_reflection(1.0), NumericError);
}

TEST_CASE("random-incidence absorption agrees with angular quadrature") {
  CHECK(paris_random_absorption(1.0) == doctest::Approx(0.9097).epsilon(1e-4 / 0.9097));
  CHECK(std::abs(paris_random_absorption(1.0) - 8.0 * (1.5 - std::log(4.0))) < 1e-12);
  CHECK(std::abs(paris_random_absorption({2.0, -1.0}) - 0.87045214540917454) < 1e-12);
  for (double r : {0.5, 1.0, 2.0, 5.0, 20.0}) {
    for (double x : {-5.0, -1.0, 0.0, 1.0, 5.0}) {
      const Complex z(r, x);
      CHECK_MESSAGE(std::abs(paris_random_absorption(z) - quadrature_random_absorption(z)) < 1e-6, z);
    }
  }
  // the x -> 0 branch is continuous with its neighbours
  CHECK(std::abs(paris_random_absorption({3.0, 1e-9}) - paris_random_absorption(3.0)) < 1e-8);
  CHECK(paris_random_absorption(1e6) < 1e-4);
  CHECK_THROWS_AS(paris_random_absorption(0.0), DomainError);
  CHECK_THROWS_AS(paris_random_absorption({-1.0, 2.0}), DomainError);
}

TEST_CASE("material spec") {
  const MaterialSpec c = MaterialSpec::constant({2.0, -1.0});
  CHECK(c.impedance(123.0) == Complex(2.0, -1.0));
  const MaterialSpec p = MaterialSpec::porous(39260.0, 0.04);
  CHECK(p.impedance(1000.0) == porous_surface_impedance(1000.0, 39260.0, 0.04));
  CHECK_THROWS_AS(MaterialSpec::constant({-0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(MaterialSpec::porous(0.0, 0.04), DomainError);
  CHECK_THROWS_AS(MaterialSpec::porous(1.0, -0.04), DomainError);
  const ImpedanceSpectrum s = tabulate(p, {100.0, 1000.0, 2000.0});
  REQUIRE(s.zeta.size() == 3);
  REQUIRE(s.alpha.size() == 3);
  for (double a : s.alpha) CHECK((a >= 0.0 && a <= 1.0));
  CHECK(s.alpha[1] == absorption_at_angle(s.zeta[1]));
}
