#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mobility {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or unreadable input data: files, edge lists, CSVs, config files.
class InputError : public Error {
 public:
  using Error::Error;
};

// A malformed line in a line-oriented input. line() is 1-based; 0 means the
// problem is not tied to a single line (e.g. an empty stream).
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError(line == 0 ? what
                             : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid arguments or configuration (contradictory options, bad ranges).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A computation that cannot produce a meaningful value (all-degenerate
// candidate sets, zero weight vectors, rank-deficient fits).
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mobility
