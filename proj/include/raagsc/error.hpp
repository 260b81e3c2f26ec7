#pragma once

#include <stdexcept>
#include <string>

namespace raagsc {

// Base class for every error the library raises on bad input or failed checks.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. `position` is a byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"), message_(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

// A precondition on arguments was violated (unknown vertex, bad range, shape mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A configured size guard (dimension, support size, recursion depth) would be exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed; signals a bug rather than bad input.
class CheckFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace raagsc
