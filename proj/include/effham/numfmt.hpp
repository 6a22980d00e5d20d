#pragma once

#include <string>
#include <string_view>

namespace effham {

// Shortest representation that parses back to the identical double.
std::string format_double(double value);

// 17 significant digits (printf %.17g equivalent), locale independent.
std::string format_double_17(double value);

// Strict full-token parse; throws std::invalid_argument on trailing garbage.
double parse_double(std::string_view token);

// FNV-1a 64-bit content digest, rendered as 16 hex characters.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace effham
