#include "bwl/valpha.hpp"

#include <cmath>

#include "bwl/errors.hpp"

namespace bwl::valpha {

Report report(double alpha, const std::vector<double>& grid) {
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw ParameterError(
            "valpha: need alpha > 2 (the tilde tail diverges otherwise)");
    if (grid.empty()) throw ParameterError("valpha: empty grid");
    Report rep;
    rep.alpha = alpha;
    rep.rows.reserve(grid.size());
    double prev = -1.0;
    for (double l : grid) {
        if (!std::isfinite(l) || !(l >= 0.0) || !(l > prev))
            throw ParameterError(
                "valpha: grid must be strictly ascending levels >= 0");
        prev = l;
        const double lg = std::log1p(l);
        Row row;
        row.level = l;
        row.v_hat = std::exp((1.0 - alpha) * lg) / (alpha - 1.0);
        row.v_tilde_hat =
            std::exp((2.0 - alpha) * lg) / ((alpha - 1.0) * (alpha - 2.0));
        row.ratio_times_L = (1.0 + l) * row.v_hat / row.v_tilde_hat;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace bwl::valpha
