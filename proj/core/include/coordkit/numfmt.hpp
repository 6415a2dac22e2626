#pragma once

#include <string>
#include <string_view>

namespace coordkit {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Strict parse of a whole field; returns false on trailing garbage.
bool parse_double(std::string_view text, double& out);

}  // namespace coordkit
