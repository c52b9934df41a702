/// @file io.h
/// @brief Small file and number-formatting helpers.

#pragma once

#include <filesystem>
#include <string>

namespace sap {

/// Reads a whole file. Throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);

/// Writes a whole file, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trip decimal representation of a double. Deterministic,
/// locale-independent; parsing the result recovers the exact value.
std::string format_double(double value);

}  // namespace sap
