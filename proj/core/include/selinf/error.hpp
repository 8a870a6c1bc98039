#pragma once

#include <stdexcept>
#include <string>

namespace selinf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments of an operation does not hold.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A combinatorial size guard was exceeded. `flag()` names the option that
/// lifts the limit.
class GuardExceeded : public Error {
 public:
  GuardExceeded(const std::string& what, std::string flag)
      : Error(what + " (raise the limit with " + flag + ")"), flag_(std::move(flag)) {}

  const std::string& flag() const noexcept { return flag_; }

 private:
  std::string flag_;
};

/// Malformed text input: dataset files, rational literals.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace selinf
