#pragma once

#include <stdexcept>
#include <string>

namespace fiid {

// Raised when an argument violates an operation's precondition. `field()`
// names the offending parameter so front ends can report it.
class InvalidInput : public std::invalid_argument {
 public:
  InvalidInput(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Raised when an exhaustive oracle is asked for an instance beyond its hard size guard.
class OracleGuard : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a randomized construction exhausts its retry budget.
class ConstructionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fiid
