#pragma once

// Closed forms for the rapidly increasing weights
// v_alpha(r) = (1-r)^-1 (log e/(1-r))^-alpha with alpha > 2, in the level
// coordinate (L = 1 + lambda):
//
//   v-hat(lambda)       = L^(1-alpha) / (alpha-1),
//   tilde-v-hat(lambda) = L^(2-alpha) / ((alpha-1)(alpha-2)),
//
// so L * v-hat / tilde-v-hat is the constant alpha-2: the tails are
// comparable only after one extra factor of log e/(1-r).  For alpha <= 2
// the tilde tail diverges and the report refuses.

#include <vector>

namespace bwl::valpha {

struct Row {
    double level;
    double v_hat;
    double v_tilde_hat;
    double ratio_times_L;  // L * v_hat / v_tilde_hat; == alpha-2 up to rounding
};

struct Report {
    double alpha = 0.0;
    std::vector<Row> rows;
};

// Evaluate the closed forms over an ascending grid of levels >= 0.
// ParameterError for alpha <= 2 or a bad grid.
Report report(double alpha, const std::vector<double>& grid);

}  // namespace bwl::valpha
