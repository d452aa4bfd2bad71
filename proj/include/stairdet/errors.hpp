#pragma once

#include <stdexcept>
#include <string>

namespace stairdet {

/// Bad call-site input: dimension mismatches, invalid flags, unknown enums.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerically invalid state: non-positive-definite pivot, zero diagonal,
/// iteration breakdown, reciprocal of a non-positive value.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stairdet
