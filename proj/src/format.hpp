#pragma once

#include <charconv>
#include <string>

namespace swarminfer {

// Shortest round-trip decimal form; keeps file outputs byte-stable across
// runs with the same seed.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace swarminfer
