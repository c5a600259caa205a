#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scsvm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed svmlight input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}
  explicit ParseError(const std::string& message) : ParseError(message, 0) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shapes of vectors, models or datasets do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine produced non-finite values or a factorization failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scsvm
