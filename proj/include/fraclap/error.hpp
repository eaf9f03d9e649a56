#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

// Bad input or violated precondition. CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver / series / root finder did not deliver. CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fraclap
