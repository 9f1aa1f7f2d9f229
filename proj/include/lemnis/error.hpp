#pragma once

#include <stdexcept>
#include <string>

namespace lemnis {

// Malformed input: wrong dimensions, values outside their domain, bad file contents.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A computation ran but could not reach its target (budget, cap, retry limit).
class ComputationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace lemnis
