#ifndef COALSIM_ERRORS_HPP
#define COALSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coalsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument (index out of range, empty input, bad parameter).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The measure assigns no rate to any event in the requested context.
class DegenerateMeasureError : public Error {
 public:
  using Error::Error;
};

/// A mass partition with a zero coordinate where positivity is required.
class DegeneratePartitionError : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed a configured size bound.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given model configuration.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace coalsim

#endif  // COALSIM_ERRORS_HPP
