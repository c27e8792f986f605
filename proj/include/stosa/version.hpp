#pragma once

namespace stosa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stosa
