#pragma once

#include <charconv>
#include <string>

namespace bwl {

// Shortest decimal string that parses back to exactly v (std::to_chars
// shortest round-trip form); used for weight names and metadata keys.
inline std::string format_shortest(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace bwl
