#pragma once

#include <stdexcept>
#include <string>

namespace mirror {

/// Malformed input: bad dimensions, non-normalized vectors, unparsable files.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A request exceeds a hard size limit of an algorithm (e.g. brute force over d!).
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

}  // namespace mirror
