#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace altproj {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live in different ambient spaces, or a list index is out of range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument is outside the operation's domain (non-finite entry, tol <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An explicit (finite) schedule was asked for an index past its end.
class ScheduleExhausted : public Error {
 public:
  using Error::Error;
};

// A search for an exponent or a perturbation exceeded its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A construction finished but one of its guaranteed inequalities did not
// verify numerically.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the file name and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& message)
      : Error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace altproj
