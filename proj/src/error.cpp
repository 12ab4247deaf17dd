#include "whkit/error.hpp"

namespace whkit {

namespace {

std::string format_parse_error(const std::string& source, std::size_t line,
                               const std::string& what) {
  if (line == 0) return source + ": " + what;
  return source + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(format_parse_error(source, line, what)), line_(line) {}

}  // namespace whkit
