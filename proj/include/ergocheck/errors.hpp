#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ergocheck {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed network text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DuplicateSpecies : public ParseError {
 public:
  using ParseError::ParseError;
};

class NonPositiveRate : public ParseError {
 public:
  using ParseError::ParseError;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OverlappingConservation : public Error {
 public:
  using Error::Error;
};

class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class UnsupportedReactionOrder : public Error {
 public:
  explicit UnsupportedReactionOrder(std::size_t reaction)
      : Error("reaction " + std::to_string(reaction + 1) + " consumes three or more molecules"),
        reaction_(reaction) {}
  // 0-based reaction index.
  std::size_t reaction() const { return reaction_; }

 private:
  std::size_t reaction_;
};

class PropensityOverflow : public Error {
 public:
  using Error::Error;
};

class WitnessRejected : public Error {
 public:
  using Error::Error;
};

// Input that is well-formed but incomplete, e.g. conserved totals missing.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace ergocheck
