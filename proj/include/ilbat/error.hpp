#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ilbat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed NET/INC text, or a network that breaks the simple-graph rules.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A network that violates its invariants (self-loop, parallel arc, ...).
class InvalidNetwork : public Error {
 public:
  using Error::Error;
};

/// An increment that cannot be applied to the current network.
class InvalidIncrement : public Error {
 public:
  using Error::Error;
};

/// An enumeration or memory limit was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ilbat
