#pragma once

#include <stdexcept>
#include <string>

namespace forcelab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the text parsers; `pos` is a 0-based offset into the input.
struct ParseError : Error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t at)
      : Error(msg + " (at position " + std::to_string(at) + ")"), pos(at) {}
};

}  // namespace forcelab
