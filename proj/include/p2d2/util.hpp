#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace p2d2 {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// FNV-1a 64-bit over a byte string, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// Wall-clock budget for long-running commands. A default-constructed
/// Deadline never expires.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(double seconds);

  bool expired() const;
  static Deadline unlimited() { return Deadline(); }

 private:
  bool armed_ = false;
  std::chrono::steady_clock::time_point end_{};
};

}  // namespace p2d2
