#pragma once

#include <charconv>
#include <string>

namespace levy::csv {

// Shortest round-trip decimal form; identical input gives identical text.
inline std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace levy::csv
