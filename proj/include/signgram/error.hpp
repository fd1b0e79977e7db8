#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace signgram {

// Base for every error raised by the library. The CLI maps these to exit
// code 2 (data error); usage errors are reported by the argument parser.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed corpus input. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(what + " at line " + std::to_string(line)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Input that is well-formed but violates a precondition of the operation.
class DataError : public Error {
 public:
  using Error::Error;
};

// Corrupt, truncated or incompatible model file.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace signgram
