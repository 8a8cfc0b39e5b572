#pragma once

#include <stdexcept>
#include <string>

namespace clonebench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files, bad arguments, violated preconditions on user data.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

// A configured resource cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Two independent computations disagree; indicates a bug, not bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace clonebench
