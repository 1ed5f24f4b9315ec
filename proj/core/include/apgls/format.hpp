#pragma once

#include <cstdint>
#include <string>

namespace apgls {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal formatting; keeps CSV output byte-stable.
std::string format_double(double value);

// "# apgls <version> | command: <command> | seed: <seed>"
std::string csv_header_comment(const std::string& command, std::uint64_t seed);

}  // namespace apgls
