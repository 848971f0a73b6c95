#pragma once

namespace weakwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace weakwalk
