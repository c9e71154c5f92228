#pragma once

#include <functional>
#include <vector>

#include "bwl/quadrature.hpp"

namespace bwl {

// Increment ratio at or above this (per chunk doubling) is treated as
// failure of geometric decay.  A log-divergent integrand gives ratios ~1,
// an exponentially dying one gives ~0, and the polynomial tails of the
// rapidv family give ~0.5; see the divergence-policy note in weight.hpp.
inline constexpr double kDecayThreshold = 0.9;

// Standard probe cuts for divergence detection (lambda_max doubling ladder).
inline const std::vector<double> kProbeCuts = {10.0, 20.0, 40.0, 80.0};

struct ImproperProbe {
    std::vector<double> cuts;
    std::vector<double> increments; // integral over (cut[i-1], cut[i]]
    std::vector<double> partials;   // running totals
    bool divergent = false;
};

ImproperProbe probe_improper(const std::function<double(double)>& f,
                             const std::vector<double>& cuts,
                             const QuadOptions& opt = {});

} // namespace bwl
