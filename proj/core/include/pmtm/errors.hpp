#pragma once

#include <stdexcept>
#include <string>

namespace pmtm {

/// Invalid arguments or malformed input data (CLI exit code 1).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to produce a usable result (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmtm
