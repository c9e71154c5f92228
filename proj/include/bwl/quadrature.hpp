#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bwl/accum.hpp"
#include "bwl/errors.hpp"

namespace bwl {

struct QuadOptions {
    double rel_tol = 1e-10;   // relative target for one integrate() call
    double abs_floor = 1e-300; // treat results below this as zero
    int max_depth = 52;       // per-panel halving cap (ulp protection)
    int max_panels = 4096;    // global refinement cap for one call
};

struct PanelEstimate {
    double value;
    double error;
};

// Gauss(7)-Kronrod(15) node/weight tables (QUADPACK dqk15 constants).
namespace gk {
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
} // namespace gk

// One Gauss-Kronrod 15(7) panel; the error estimate is the usual QUADPACK
// magnification of |K15 - G7|.
template <class F>
PanelEstimate gk15(F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    const double fc = f(c);
    double kron = gk::wgk[7] * fc;
    double gauss = gk::wg[3] * fc;
    double resabs = std::fabs(kron);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk::xgk[i];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        kron += gk::wgk[i] * (f1 + f2);
        resabs += gk::wgk[i] * (std::fabs(f1) + std::fabs(f2));
        if (i % 2 == 1) gauss += gk::wg[i / 2] * (f1 + f2);
    }
    const double value = kron * h;
    double err = std::fabs((kron - gauss) * h);
    resabs *= std::fabs(h);
    if (resabs > 0.0 && err > 0.0) {
        const double scale = std::pow(200.0 * err / resabs, 1.5);
        if (scale < 1.0) err = resabs * scale;
    }
    return {value, err};
}

// Adaptive integral of f over [a, b] with a global error budget: the panel
// with the largest error estimate is bisected until the summed estimates
// meet the relative target.  Unlike budgets proportional to panel length,
// this lets an endpoint singularity (say sqrt(lambda) at 0) draw on the
// whole tolerance, so it converges in a few dozen splits instead of
// starving.  Deterministic: the refinement order is a pure function of f,
// and the final panels are accumulated in ascending position order.
template <class F>
double integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    if (a == b) return 0.0;
    if (!(a < b)) throw ParameterError("integrate: need a <= b");
    struct Panel {
        double a, b;
        PanelEstimate est;
        int depth;
    };
    std::vector<Panel> panels;
    panels.reserve(64);
    panels.push_back({a, b, gk15(f, a, b), 0});
    for (;;) {
        double err_sum = 0.0, val_sum = 0.0, worst_err = -1.0;
        std::size_t worst = panels.size();
        for (std::size_t i = 0; i < panels.size(); ++i) {
            err_sum += panels[i].est.error;
            val_sum += panels[i].est.value;
            if (panels[i].depth < opt.max_depth &&
                panels[i].est.error > worst_err) {
                worst_err = panels[i].est.error;
                worst = i;
            }
        }
        const double target =
            std::max(opt.rel_tol * std::fabs(val_sum), opt.abs_floor);
        if (err_sum <= target) break;
        if (worst == panels.size() ||
            panels.size() >= std::size_t(opt.max_panels)) {
            if (err_sum > 100.0 * target)
                throw NumericalFailure(
                    "integrate: panel refinement exhausted");
            break;
        }
        const Panel p = panels[worst];
        const double m = 0.5 * (p.a + p.b);
        panels[worst] = {p.a, m, gk15(f, p.a, m), p.depth + 1};
        panels.push_back({m, p.b, gk15(f, m, p.b), p.depth + 1});
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    Accum acc;
    for (const Panel& p : panels) acc.add(p.est.value);
    return acc.total();
}

// Integral over a breakpoint-split interval: one adaptive call per cell,
// cells combined in ascending order.
template <class F>
double integrate_cells(F&& f, const std::vector<double>& pts,
                       const QuadOptions& opt = {}) {
    Accum acc;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc.add(integrate(f, pts[i], pts[i + 1], opt));
    return acc.total();
}

// Tail integral over lambda in [lambda0, ~1e12] via the substitution
// lambda = lambda0 + t/(1-t).  Polynomially decaying integrands
// f ~ (1+lambda)^(-s), s >= 2, become smooth in t, so the far tail that a
// chunked sweep would miss (remainder ~ 1/lambda_max) is captured exactly.
template <class F>
double integrate_lambda_tail(F&& f, double lambda0,
                             const QuadOptions& opt = {}) {
    static const double offsets[] = {0.0, 1.0,  3.0,  10.0, 30.0, 1e2,
                                     1e3, 1e4,  1e6,  1e8,  1e10, 1e12};
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double lam = lambda0 + t / om;
        return f(lam) / (om * om);
    };
    Accum acc;
    for (std::size_t i = 0; i + 1 < std::size(offsets); ++i) {
        const double t0 = offsets[i] / (1.0 + offsets[i]);
        const double t1 = offsets[i + 1] / (1.0 + offsets[i + 1]);
        acc.add(integrate(g, t0, t1, opt));
    }
    return acc.total();
}

} // namespace bwl
