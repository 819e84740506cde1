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

#include <stdexcept>
#include <string>

namespace impedans {

// Errors thrown by the core. The C API maps each kind onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition on an input value violated (non-positive frequency, too few points, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a pole or produced a non-finite number.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed file, config, or schema violation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace impedans
