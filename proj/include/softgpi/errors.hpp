#pragma once

#include <stdexcept>
#include <string>

namespace softgpi {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario, design or gain configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operation called in the wrong lifecycle state (e.g. controller not reset).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Malformed tabular input (wrong header, nonuniform sampling, too few rows).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Data that cannot be used for identification (nonuniform spacing, too short).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Least-squares problem without a unique solution.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// A referenced input file is missing or unreadable.
class FileError : public Error {
 public:
  using Error::Error;
};

/// Output could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace softgpi
