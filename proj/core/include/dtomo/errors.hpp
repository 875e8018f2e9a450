// Copyright 2026 The dtomo authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dtomo {

// Argument outside its mathematical domain (saturated click probability,
// negative mean photon number, ...).
class DomainError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Matrix dimensions that do not conform.
class ShapeError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Measured data violating a structural invariant (threshold-count
// monotonicity, inconsistent outcome counts across probes, ...).
class DataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Poisson mass lost to Hilbert-space truncation beyond tolerance.
class TruncationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run-configuration file problems.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File read/write failures.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// POVM input failing row-stochasticity validation.
class PovmValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dtomo
