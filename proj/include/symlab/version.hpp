#pragma once

namespace symlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace symlab
