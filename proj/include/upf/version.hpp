#pragma once

namespace upf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace upf
