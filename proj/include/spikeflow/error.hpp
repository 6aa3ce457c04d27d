#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spikeflow {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or record. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid argument (unknown id, bad network, infeasible request).
class InputError : public Error {
 public:
  using Error::Error;
};

// A size guard or search budget was exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

// The controller tried to use more working memory than it was given.
class WorkingMemoryError : public Error {
 public:
  using Error::Error;
};

// An internal invariant of a construction did not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A decider consultation ran out of time with neither verdict neuron firing.
class UndecidedError : public Error {
 public:
  using Error::Error;
};

}  // namespace spikeflow
