#pragma once

#include <stdexcept>
#include <string>

namespace xorlift {

// Malformed arguments, files or preconditions. CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity that has no value for this input (empty promise, zero spectrum).
// Reported like invalid input.
class UndefinedQuantity : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A desk-scale size guard was exceeded. CLI exit code 3.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checked mathematical invariant failed at runtime. CLI exit code 4.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

}  // namespace xorlift
