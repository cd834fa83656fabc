#pragma once

#include <stdexcept>
#include <string>

namespace tri {

// Rejected input: invalid field, curve, signature or parameter. CLI exit code 1.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A mathematical invariant failed to hold (oracle disagreement, functional
// equation residual, Weil bound). Always a bug. CLI exit code 2.
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace tri
