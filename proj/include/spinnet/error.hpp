#pragma once

#include <stdexcept>
#include <string>

namespace spinnet {

// Thrown when an input violates a documented precondition (non-Hermitian
// matrix, mismatched dimensions, out-of-range site index, ...). The message
// names the violated quantity.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace spinnet
