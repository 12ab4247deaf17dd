#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace whkit {

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// File missing or unreadable/unwritable.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numeric precondition, postcondition or invariant does not hold.
class ContractError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace whkit
