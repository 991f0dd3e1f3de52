#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace occbench {

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

/// Writes to a sibling temp file then renames over the target, creating
/// parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, std::span<const uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

/// Regular files directly under dir whose extension (lower-cased) is one of
/// exts, sorted by filename.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              std::initializer_list<std::string_view> exts);

/// Makes path relative to base when it lies under it; otherwise returns it
/// unchanged. Always uses generic ('/') separators.
std::string relative_string(const std::filesystem::path& path, const std::filesystem::path& base);

}  // namespace occbench
