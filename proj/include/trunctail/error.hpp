// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_ERROR_HPP
#define TRUNCTAIL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace trunctail {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent input data (CSV rows, config files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data violate a modelling assumption (e.g. gamma2 <= gamma1).
class ModelViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough usable observations: empty samples, vanishing tail mass.
class DegenerateData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or root finding failed to meet its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trunctail

#endif  // TRUNCTAIL_ERROR_HPP
