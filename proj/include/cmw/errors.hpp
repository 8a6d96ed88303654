#pragma once

#include <stdexcept>
#include <string>

namespace cmw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension outside the supported range of an operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (negative weight, non-monotone input, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Overflow, failed certification of a truncation, solver breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The question is outside what the implemented criteria can decide.
class UndecidableError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmw
