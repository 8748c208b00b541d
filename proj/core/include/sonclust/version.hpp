#pragma once

namespace sonclust {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sonclust
