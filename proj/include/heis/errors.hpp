#pragma once

#include <stdexcept>
#include <string>

namespace heis {

/// A point lies outside the domain where an evaluator is defined
/// (e.g. the gauge derivatives at the pole, or t outside the graph interval).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The horizontal normal vanishes, so the horizontal Gauss map is undefined.
class CharacteristicPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A graph function violates G' >= 0, or a G spec string cannot be parsed.
class InvalidGraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An integration routine failed to reach the requested tolerance, or two
/// independent quadrature paths disagree.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heis
