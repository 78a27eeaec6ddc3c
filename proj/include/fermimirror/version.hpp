#pragma once

namespace fermimirror {

inline constexpr const char* kToolName = "fermimirror";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fermimirror
