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

// Vectorized elementwise kernels. Built in their own translation unit so the
// relaxed floating-point flags that enable glibc's vector math library do not
// leak into the rest of the core.

namespace impedans::simd {

/// s[i] = sin(scale * x[i]), c[i] = cos(scale * x[i]). x may alias s.
void sincos(const double* x, double scale, double* s, double* c, long n);

}  // namespace impedans::simd
