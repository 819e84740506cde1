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

#include "simd_math.hpp"

#include <cmath>

namespace impedans::simd {

// Two passes: a fused loop gets rewritten into scalar sincos calls, which
// have no vector variant. cos goes first so x may alias s.
void sincos(const double* x, double scale, double* s, double* c, long n) {
#pragma omp simd
  for (long i = 0; i < n; ++i) c[i] = std::cos(scale * x[i]);
#pragma omp simd
  for (long i = 0; i < n; ++i) s[i] = std::sin(scale * x[i]);
}

}  // namespace impedans::simd
