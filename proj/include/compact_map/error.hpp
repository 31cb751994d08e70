#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace compact_map {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument: non-finite angle, negative distance, bad config value.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Graph structure violation: unknown/duplicate id, self loop, removing a
// vertex that still has edges, disconnected graph handed to the solver.
class MapError : public Error {
 public:
  using Error::Error;
};

// Non-finite cost or a factorization failure inside the solver.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. line and column are 1-based; column 0 means the
// whole line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace compact_map
