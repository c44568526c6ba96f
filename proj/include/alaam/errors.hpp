#pragma once

#include <stdexcept>
#include <string>

namespace alaam {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or unparseable value.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Mismatched sizes between graph, attributes, or parameter vectors.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid or missing run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A method was invoked on inputs outside its supported domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown during sampling or optimization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace alaam
