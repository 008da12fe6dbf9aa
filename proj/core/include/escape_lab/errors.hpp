#pragma once

#include <stdexcept>
#include <string>

namespace escape_lab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (c <= 0, d < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range vertex address.
class AddressError : public Error {
 public:
  using Error::Error;
};

/// Query beyond the levels a sampled field covers.
class HorizonError : public Error {
 public:
  using Error::Error;
};

/// Work or memory requirement exceeds the configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Invalid run or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace escape_lab
