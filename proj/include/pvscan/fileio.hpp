#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pvscan {

std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Writes to a temporary sibling first, then renames into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace pvscan
