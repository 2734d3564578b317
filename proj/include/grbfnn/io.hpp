#pragma once

#include <string>

namespace grbfnn {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Strict parse of a full token; returns false on trailing garbage,
// overflow, or empty input. Accepts inf/nan spellings (callers that need
// finite values must check).
bool parse_double(const std::string& token, double& out);

// Writes via a temporary file in the same directory followed by a rename,
// so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace grbfnn
