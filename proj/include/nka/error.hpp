#pragma once

#include <stdexcept>
#include <string>

namespace nka {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two values that must share a label set, test size or shape do not.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A value violates the documented precondition of an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed external input (CSV, JSON, command-line values).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nka
