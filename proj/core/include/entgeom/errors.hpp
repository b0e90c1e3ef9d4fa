#pragma once

#include <stdexcept>
#include <string>

namespace entgeom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index outside the valid range of a slot or split.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Dimensions of two objects do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value violates the invariant of its type (unit norm, Hermiticity, trace...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// The requested construction needs n_N >= n_1 * ... * n_{N-1}.
class UnsupportedShapeError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on inputs that do not satisfy its contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed state file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace entgeom
