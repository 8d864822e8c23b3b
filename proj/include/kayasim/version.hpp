#pragma once

namespace kayasim {

inline constexpr const char* kEngineVersion = "0.1.0";

} // namespace kayasim
