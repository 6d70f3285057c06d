#pragma once

#include <charconv>
#include <string>

namespace vucrl {

// Shortest text that parses back to the same double.
inline std::string exact_text(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

}  // namespace vucrl
