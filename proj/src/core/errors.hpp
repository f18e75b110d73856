#pragma once

#include <stdexcept>
#include <string>

namespace adyn {

// Invalid or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument outside the domain of an operation (trait outside the space,
// zero density where a positive one is required, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A documented precondition of an engine entry point does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Root finding, quadrature or ODE integration failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adyn
