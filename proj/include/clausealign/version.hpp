#pragma once

namespace clausealign {
inline constexpr const char* kToolName = "clausealign";
inline constexpr const char* kVersion = "0.1.0";
}  // namespace clausealign
