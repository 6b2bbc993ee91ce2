#pragma once

namespace covsieve {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace covsieve
