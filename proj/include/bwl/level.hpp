#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bwl/errors.hpp"

namespace bwl {

// Boundary-distance coordinate lambda = -ln(1-r), the radial parameter used
// everywhere in this library.  The construction breakpoints t_n = 1 - e^-n
// and r_x = 1 - 2^(-x psi(x)) are exact integers / short products in lambda
// but collapse to 1.0 in plain radius beyond lambda ~ 37, hence the rule:
// never form 1-r by subtraction; carry lambda and use expm1/log1p.
struct Level {
    double lambda = 0.0;

    static Level from_lambda(double lam) {
        if (!(lam >= 0.0) || !std::isfinite(lam))
            throw ParameterError("Level: lambda must be finite and >= 0");
        return Level{lam};
    }
    static Level from_r(double r) {
        if (!(r >= 0.0) || r >= 1.0)
            throw ParameterError("Level: r must lie in [0,1)");
        return Level{-std::log1p(-r)};
    }

    double r() const { return -std::expm1(-lambda); }
    double one_minus_r() const { return std::exp(-lambda); }
    // L = log(e/(1-r)) = 1 + lambda, the paper's logarithmic factor.
    double log_factor() const { return 1.0 + lambda; }
};

inline bool operator<(Level a, Level b) { return a.lambda < b.lambda; }
inline bool operator==(Level a, Level b) { return a.lambda == b.lambda; }

// count log-spaced levels on [lo, hi] (geometric in lambda), ascending.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw ParameterError("log_spaced: need 0 < lo < hi and count >= 2");
    std::vector<double> g(count);
    const double q = std::log(hi / lo) / double(count - 1);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(q * double(i));
    g.front() = lo;
    g.back() = hi;
    return g;
}

// Sorted union of a grid with family breakpoints; exact-duplicate removal only
// (two levels that differ in the last bit are genuinely different panels).
inline std::vector<double> merge_grid(std::vector<double> grid,
                                      const std::vector<double>& extra) {
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

} // namespace bwl
