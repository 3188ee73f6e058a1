#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace atf {

// Shortest decimal string that parses back to exactly the same double.
// "inf"/"-inf" for infinities.
std::string format_double(double v);

// Full-string parse; accepts "inf"/"-inf". Throws std::runtime_error on
// anything else that is not a complete floating-point literal.
double parse_double(std::string_view s);

// Full-string parse of a non-negative integer.
std::uint64_t parse_u64(std::string_view s);

std::string_view trim(std::string_view s);

// Splits on the delimiter without collapsing empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

// Whole-file helpers.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace atf
