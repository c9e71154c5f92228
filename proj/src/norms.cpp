#include "bwl/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bwl/accum.hpp"
#include "bwl/format.hpp"
#include "bwl/level.hpp"

namespace bwl {

const char* to_string(CRQuantity q) {
    switch (q) {
        case CRQuantity::NormF: return "norm_f";
        case CRQuantity::NormRe: return "norm_re";
        case CRQuantity::SupEnvTilde: return "supenv_tilde";
        case CRQuantity::SupEnvOmega: return "supenv_omega";
        case CRQuantity::LpValue: return "lp_value";
    }
    return "?";
}

namespace {

double chunk_integral(const std::function<double(double)>& g, const Weight& w,
                      MeasureKind m, double a, double b,
                      const ProbeOptions& opt) {
    std::vector<double> pts{a};
    if (b - a <= opt.breakpoint_span_max)
        for (double bp : w.breakpoints(a, b))
            if (bp > a && bp < b) pts.push_back(bp);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto h = [&](double l) { return g(l) * measure_density_lambda(w, m, l); };
    const double v = integrate_cells(h, pts, opt.quad);
    if (!std::isfinite(v))
        throw NumericalFailure(
            "norm probe: integrand overflows double on levels [" +
            format_shortest(a) + ", " + format_shortest(b) +
            "] before divergence could be certified");
    return v;
}

void fit_log(const std::array<double, 4>& cuts,
             const std::array<double, 4>& vals, double& a, double& b,
             double& residual) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double x = std::log(cuts[i]);
        sx += x;
        sy += vals[i];
        sxx += x * x;
        sxy += x * vals[i];
    }
    const double den = 4.0 * sxx - sx * sx;
    b = (4.0 * sxy - sx * sy) / den;
    a = (sy - b * sx) / 4.0;
    residual = 0.0;
    for (int i = 0; i < 4; ++i)
        residual = std::max(
            residual, std::fabs(vals[i] - (a + b * std::log(cuts[i]))));
}

std::string partials_note(const ImproperProbe& pr,
                          const std::array<double, 4>& cuts) {
    std::string s = "partial integrals";
    for (int i = 0; i < 4; ++i)
        s += " I(" + format_shortest(cuts[i]) +
             ")=" + format_shortest(pr.partials[i]);
    s += ", log-fit slope b=" + format_shortest(pr.fit_b);
    return s;
}

void check_probe_options(const ProbeOptions& opt) {
    double prev = 0.0;
    for (double c : opt.cuts) {
        if (!(c > prev) || !std::isfinite(c))
            throw ParameterError("probe: cuts must be ascending and positive");
        prev = c;
    }
    if (!(opt.rel_tol > 0.0) || !(opt.divergence_ratio > 0.0) ||
        !(opt.divergence_ratio < 1.0) || opt.max_chunks < 1)
        throw ParameterError("probe: bad options");
}

void check_p(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw ParameterError("norm: need finite p > 0");
}

}  // namespace

ImproperProbe probe_improper(const std::function<double(double)>& g_pow,
                             const Weight& w, MeasureKind m,
                             const ProbeOptions& opt) {
    check_probe_options(opt);
    ImproperProbe out;
    Accum acc;
    std::array<double, 3> incr{};
    double prev_cut = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double chunk =
            chunk_integral(g_pow, w, m, prev_cut, opt.cuts[i], opt);
        acc.add(chunk);
        out.partials[i] = acc.total();
        if (i > 0) incr[i - 1] = out.partials[i] - out.partials[i - 1];
        prev_cut = opt.cuts[i];
    }
    fit_log(opt.cuts, out.partials, out.fit_a, out.fit_b, out.fit_residual);
    if (incr[1] > 0.0 && incr[2] > 0.0 &&
        incr[2] >= opt.divergence_ratio * incr[1] &&
        incr[1] >= opt.divergence_ratio * incr[0]) {
        out.divergent = true;
        out.value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    // Convergent: doubling continuation chunks with a geometric-tail
    // certificate; the increment ratio is capped at 0.95 so mild
    // non-monotonicity cannot fake an over-tight bound.
    double lo = opt.cuts[3];
    double d_prev = incr[2];
    for (int k = 0; k < opt.max_chunks; ++k) {
        const double hi = 2.0 * lo;
        const double d = chunk_integral(g_pow, w, m, lo, hi, opt);
        acc.add(d);
        ++out.chunks;
        if (!(d > 0.0)) break;  // measure exhausted below double range
        const double q =
            d_prev > 0.0 ? std::min(d / d_prev, 0.95) : 0.95;
        if (d * q / (1.0 - q) <= opt.rel_tol * std::fabs(acc.total())) break;
        if (k >= 8 && d_prev > 0.0 && d / d_prev >= 0.98)
            throw NumericalFailure(
                "probe_improper: tail neither certified nor clearly "
                "divergent (increment ratio ~" +
                format_shortest(d / d_prev) + " at level " +
                format_shortest(hi) + ")");
        if (k + 1 == opt.max_chunks)
            throw NumericalFailure(
                "probe_improper: chunk budget exhausted at level " +
                format_shortest(hi));
        d_prev = d;
        lo = hi;
    }
    out.value = acc.total();
    return out;
}

double bergman_norm(const fn::TestFunction& f, const Weight& w, double p,
                    const ProbeOptions& opt) {
    check_p(p);
    auto g = [&](double l) {
        return mp_mean_pow(f, Target::Full, p, l, opt.quad);
    };
    const auto pr = probe_improper(g, w, MeasureKind::OmegaRDr, opt);
    if (pr.divergent)
        throw DivergentNorm("bergman_norm(" + f.name() + ", " + w.name() +
                            ", p=" + format_shortest(p) +
                            ") diverges: " + partials_note(pr, opt.cuts));
    return std::pow(2.0 * pr.value, 1.0 / p);
}

double repart_norm(const fn::TestFunction& f, const Weight& w, double p,
                   const ProbeOptions& opt) {
    check_p(p);
    auto g = [&](double l) {
        return mp_mean_pow(f, Target::RealPart, p, l, opt.quad);
    };
    const auto pr = probe_improper(g, w, MeasureKind::OmegaRDr, opt);
    if (pr.divergent)
        throw DivergentNorm("repart_norm(" + f.name() + ", " + w.name() +
                            ", p=" + format_shortest(p) +
                            ") diverges: " + partials_note(pr, opt.cuts));
    return std::pow(2.0 * pr.value, 1.0 / p);
}

double lp_functional(const fn::TestFunction& f, const Weight& w, double p,
                     double derivative_weight_exponent,
                     const ProbeOptions& opt) {
    check_p(p);
    if (!std::isfinite(derivative_weight_exponent))
        throw ParameterError("lp_functional: exponent must be finite");
    const double e = derivative_weight_exponent;
    auto g = [&](double l) {
        // Combined in log space: the mean alone can overflow double (HL
        // derivative means grow like e^{(k+1)p lambda}) even when the
        // product with e^{-e lambda} is tame.
        const double mlog =
            mp_mean_pow_log(f, Target::Derivative, p, l, opt.quad);
        return std::exp(mlog - e * l);
    };
    const auto pr = probe_improper(g, w, MeasureKind::OmegaRDr, opt);
    if (pr.divergent)
        throw DivergentNorm("lp_functional(" + f.name() + ", " + w.name() +
                            ", p=" + format_shortest(p) +
                            ", e=" + format_shortest(e) +
                            ") diverges: " + partials_note(pr, opt.cuts));
    const double f0 = std::abs(f.value_at_zero());
    const double f0p = f0 == 0.0 ? 0.0 : std::exp(p * std::log(f0));
    return f0p + 2.0 * pr.value;
}

double ConjugateReport::ratio(CRQuantity i, CRQuantity j) const {
    const auto a = std::size_t(i), b = std::size_t(j);
    if (divergent[a] || divergent[b])
        return std::numeric_limits<double>::quiet_NaN();
    return value[a] / value[b];
}

ConjugateReport conjugate_report(const fn::TestFunction& f, const Weight& w,
                                 double p, const ProbeOptions& opt) {
    check_p(p);
    ConjugateReport rep;
    rep.p = p;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    const auto idx = [](CRQuantity q) { return std::size_t(q); };
    try {
        rep.value[idx(CRQuantity::NormF)] = bergman_norm(f, w, p, opt);
    } catch (const DivergentNorm&) {
        rep.divergent[idx(CRQuantity::NormF)] = true;
        rep.value[idx(CRQuantity::NormF)] = nan;
    }
    try {
        rep.value[idx(CRQuantity::NormRe)] = repart_norm(f, w, p, opt);
    } catch (const DivergentNorm&) {
        rep.divergent[idx(CRQuantity::NormRe)] = true;
        rep.value[idx(CRQuantity::NormRe)] = nan;
    }

    // Running supremum of M_p^p(Re f) on a profile to the last cut; beyond
    // it the envelope is max(settled value, the mean itself).
    const double profile_hi = opt.cuts[3];
    std::vector<double> grid{0.0};
    for (double l : log_spaced(1e-3, profile_hi, 768)) grid.push_back(l);
    const MeanProfile prof =
        mean_profile(f, Target::RealPart, p, grid, opt.quad);
    auto env = [&, prof](double l) {
        if (l >= profile_hi)
            return std::max(prof.sup_env.back(),
                            mp_mean_pow(f, Target::RealPart, p, l, opt.quad));
        const auto it =
            std::upper_bound(prof.grid.begin(), prof.grid.end(), l);
        const std::size_t j = std::size_t(it - prof.grid.begin());
        if (j == 0) return prof.sup_env.front();
        if (j >= prof.grid.size()) return prof.sup_env.back();
        const double t =
            (l - prof.grid[j - 1]) / (prof.grid[j] - prof.grid[j - 1]);
        return prof.sup_env[j - 1] +
               t * (prof.sup_env[j] - prof.sup_env[j - 1]);
    };

    if (!w.tilde_integrable()) {
        rep.divergent[idx(CRQuantity::SupEnvTilde)] = true;
        rep.value[idx(CRQuantity::SupEnvTilde)] = nan;
    } else {
        const auto pr = probe_improper(env, w, MeasureKind::TildeDr, opt);
        if (pr.divergent) {
            rep.divergent[idx(CRQuantity::SupEnvTilde)] = true;
            rep.value[idx(CRQuantity::SupEnvTilde)] = nan;
        } else {
            rep.value[idx(CRQuantity::SupEnvTilde)] = pr.value;
        }
    }
    {
        const auto pr = probe_improper(env, w, MeasureKind::OmegaDr, opt);
        if (pr.divergent) {
            rep.divergent[idx(CRQuantity::SupEnvOmega)] = true;
            rep.value[idx(CRQuantity::SupEnvOmega)] = nan;
        } else {
            rep.value[idx(CRQuantity::SupEnvOmega)] = pr.value;
        }
    }
    try {
        rep.value[idx(CRQuantity::LpValue)] = lp_functional(f, w, p, p, opt);
    } catch (const DivergentNorm&) {
        rep.divergent[idx(CRQuantity::LpValue)] = true;
        rep.value[idx(CRQuantity::LpValue)] = nan;
    }
    return rep;
}

}  // namespace bwl
