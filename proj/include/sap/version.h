/// @file version.h
/// @brief Tool identity embedded in reports and --version output.

#pragma once

namespace sap {

inline constexpr const char* kToolName = "sap";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace sap
