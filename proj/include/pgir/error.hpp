#pragma once

#include <stdexcept>
#include <string>

namespace pgir {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (range, dimension, count).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A reconstruction validity condition failed; the message names the condition.
class ValidityError : public Error {
public:
  using Error::Error;
};

/// Eigensolver or factorization failure.
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace pgir
