#pragma once

namespace cwi {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace cwi
