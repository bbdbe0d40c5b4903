#pragma once

#include <stdexcept>
#include <string>

namespace boolrules {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (files, polynomial text, flags).
class InputError : public Error {
public:
  using Error::Error;
};

/// CSV ingestion failure pinned to a row (1-based, header is row 1) and column.
class ParseError : public InputError {
public:
  ParseError(std::size_t row, std::string column, const std::string &what)
      : InputError("row " + std::to_string(row) +
                   (column.empty() ? "" : ", column '" + column + "'") + ": " + what),
        row_(row), column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string &column() const noexcept { return column_; }

private:
  std::size_t row_;
  std::string column_;
};

/// An operation was called in a state that does not allow it.
class StateError : public Error {
public:
  using Error::Error;
};

/// A replayed decision trace does not match the candidates presented.
class TraceMismatch : public InputError {
public:
  TraceMismatch(int cycle, std::string phase, const std::string &what)
      : InputError("trace mismatch at cycle " + std::to_string(cycle) + ", " + phase +
                   " phase: " + what),
        cycle_(cycle), phase_(std::move(phase)) {}

  int cycle() const noexcept { return cycle_; }
  const std::string &phase() const noexcept { return phase_; }

private:
  int cycle_;
  std::string phase_;
};

} // namespace boolrules
