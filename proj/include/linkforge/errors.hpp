#pragma once

#include <stdexcept>
#include <string>

namespace linkforge {

// Malformed input: bad PD code, bad polynomial text, bad tangle endpoints.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation is undefined for the given (valid) arguments.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured computational limit was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal consistency check failed; indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace linkforge
