#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hebbd {

// Operand dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a function (e.g. log of 0 in cross-entropy).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested combination (activation, error term, loss) has no implementation.
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A parameter became NaN or infinite after an update.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::string parameter, const std::string& what)
      : std::runtime_error(what), parameter_(std::move(parameter)) {}
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

// Malformed input file. `position` is a byte offset for binary formats and a
// 1-based line number for text formats.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace hebbd
