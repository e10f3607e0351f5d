#pragma once

#include <stdexcept>
#include <string>

namespace gedge {

/// Raised when a computation violates one of its numerical invariants
/// (discretization failure, solver breakdown, out-of-range result).
/// Argument/precondition problems use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace gedge
