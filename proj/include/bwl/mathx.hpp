#pragma once

#include <cmath>

namespace bwl {

// e^x - 1 - x, stable where the naive expm1(x) - x cancels.  The series is
// exact through x^7/5040; at the 1e-2 switch point the truncation sits at
// 5e-17 relative and the expm1 branch at ~4e-14.
inline double expm1m(double x) {
    if (std::fabs(x) > 1e-2) return std::expm1(x) - x;
    return x * x *
           (0.5 +
            x * (1.0 / 6.0 +
                 x * (1.0 / 24.0 +
                      x * (1.0 / 120.0 + x * (1.0 / 720.0 + x / 5040.0)))));
}

}  // namespace bwl
