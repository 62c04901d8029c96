#pragma once

namespace negembed {
inline constexpr const char* kVersion = "0.1.0";
}
