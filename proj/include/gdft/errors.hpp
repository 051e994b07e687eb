#pragma once

#include <stdexcept>
#include <string>

namespace gdft {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files, specs, or vectors.
struct ParseError : Error {
  using Error::Error;
};

// Size caps and rejected preconditions.
struct CapError : Error {
  using Error::Error;
};

// A numerical routine left its tolerance.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace gdft
