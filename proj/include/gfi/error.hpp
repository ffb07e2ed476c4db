#pragma once

#include <stdexcept>
#include <string>

namespace gfi {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mesh / CSV input. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Arguments violating an operation's preconditions (sizes, ranges, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown (NaN / infinity, non-real spectrum, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gfi
