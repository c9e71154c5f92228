#pragma once

namespace bwl {
inline constexpr const char* kVersion = "0.1.0";
}
