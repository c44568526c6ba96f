#pragma once

namespace alaam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace alaam
