#pragma once

#include <stdexcept>
#include <string>

namespace lpreg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value lies outside the documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to enumerate beyond its configured limit.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// A subroutine precondition failed; inside the engine this signals a
/// parameter-synthesis bug rather than bad user input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not attributable.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace lpreg
