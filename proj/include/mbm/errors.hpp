// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace mbm {

/// Argument outside the mathematical domain of a function (H ∉ (0,1), t outside a Hurst domain, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation exactly at a singular point of a closed form.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed caller input: duplicate times, bad spec strings, wrong parameter signs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature or factorization that did not reach its target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A check whose precondition was found violated (e.g. growth condition).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mbm
