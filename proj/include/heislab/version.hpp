#pragma once

namespace heislab {

inline constexpr const char* kToolName = "heislab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace heislab
