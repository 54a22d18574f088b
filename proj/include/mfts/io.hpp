#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mfts {

// Shortest decimal text that parses back to the same double; "nan"/"inf"
// for non-finite values.
std::string format_double(double v);

// Strict full-string parse; returns false on any trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int64(std::string_view text, long long& out);

// Writes the file atomically enough for our purposes (truncate + write),
// creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mfts
