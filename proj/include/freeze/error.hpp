#pragma once

#include <stdexcept>
#include <string>

namespace freeze {

// Bad parameters or malformed input. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that started but could not finish: sampler collapse, budget
// exhaustion, factorization failure. The CLI maps this to exit code 3.
class RuntimeAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace freeze
