#pragma once

namespace spinbound {
inline constexpr const char* kVersion = "1.0.0";
}
