#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

namespace occbench {

/// Shortest decimal that round-trips to the same double; "inf" for +inf.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Parses format_double output (including "inf"). Returns false on junk.
inline bool parse_double(std::string_view s, double& out) {
  if (s == "inf") { out = INFINITY; return true; }
  if (s == "-inf") { out = -INFINITY; return true; }
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

/// floor(x + 0.5), the rounding used for every count derived from a ratio.
inline long long round_half_up(double x) { return static_cast<long long>(std::floor(x + 0.5)); }

}  // namespace occbench
