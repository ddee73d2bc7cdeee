#pragma once

namespace trgg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace trgg
