#pragma once

namespace asymfield {
inline constexpr const char* kVersion = "0.1.0";
}
