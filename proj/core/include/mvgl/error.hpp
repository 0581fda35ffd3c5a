#pragma once

#include <stdexcept>
#include <string>

namespace mvgl {

// Malformed data handed to a routine (non-finite entries, shape mismatch, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tunable outside its admissible range.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dataset files that cannot be read or fail validation. The message always
// names the offending file (and line, when there is one).
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mvgl
