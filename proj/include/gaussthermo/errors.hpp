// Copyright 2026 The gaussthermo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace gaussthermo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input has the wrong shape, e.g. a covariance matrix that is not symmetric.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the physical or mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A required precondition (typically stability of the drift) does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure lost accuracy or hit a singular system.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The Bures metric is singular: a symplectic eigenvalue sits at the pure-state value 1.
class SingularMetricError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Finite-difference step too small for the fidelity to resolve.
class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Invalid run configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gaussthermo
