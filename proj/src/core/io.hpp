#pragma once

#include <string>
#include <vector>

namespace bhmap {

// 17-significant-digit round-trip-safe decimal rendering; every numeric CSV
// field goes through this so replay byte-comparison is exact.
std::string fmt17(double v);

bool file_exists(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);
bool files_identical(const std::string& a, const std::string& b);

} // namespace bhmap
