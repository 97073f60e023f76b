#pragma once

namespace wfbm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wfbm
