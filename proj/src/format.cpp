#include "vidmetrics/format.hpp"

#include <array>
#include <charconv>

namespace vidmetrics {

std::string format_fixed(double value, int precision) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                           std::chars_format::fixed, precision);
  if (res.ec != std::errc{}) return "nan";
  std::string s(buf.data(), res.ptr);
  // "-0.000000" and "0.000000" should print identically.
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

}  // namespace vidmetrics
