#pragma once

namespace aprep {

inline constexpr const char *kVersion = "1.0.0";

}  // namespace aprep
