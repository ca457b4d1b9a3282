#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kcollapse {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A precondition on a node, edge or index was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The exhaustive search would exceed its configured evaluation budget.
class OracleInfeasible : public Error {
 public:
  using Error::Error;
};

// A solver ran past its deadline.
class Timeout : public Error {
 public:
  using Error::Error;
};

}  // namespace kcollapse
