#pragma once

#include <filesystem>   // std::filesystem::path
#include <string>       // std::string
#include <string_view>  // std::string_view

namespace nyts {

/// Lower-case hex SHA-256 digest of `bytes`.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's contents; throws nyts::input_error when unreadable.
[[nodiscard]] std::string sha256_file(const std::filesystem::path &path);

/// Reads a whole file; throws nyts::input_error when unreadable.
[[nodiscard]] std::string read_file(const std::filesystem::path &path);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view bytes);

}  // namespace nyts
