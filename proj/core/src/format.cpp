#include "apgls/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace apgls {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string csv_header_comment(const std::string& command, std::uint64_t seed) {
  return "# apgls " + std::string(kVersion) + " | command: " + command +
         " | seed: " + std::to_string(seed);
}

}  // namespace apgls
