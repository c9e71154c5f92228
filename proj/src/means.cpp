#include "bwl/means.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <utility>

#include "bwl/accum.hpp"
#include "bwl/level.hpp"

namespace bwl {

const char* to_string(Target t) {
    switch (t) {
        case Target::Full: return "f";
        case Target::RealPart: return "ref";
        case Target::Derivative: return "fprime";
    }
    return "?";
}

namespace {

using fn::Kind;
using fn::TestFunction;

void check_mean_args(double p, double level) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw ParameterError("mp_mean: need finite p > 0");
    if (!(level >= 0.0) || !std::isfinite(level))
        throw ParameterError("mp_mean: need finite level >= 0");
}

// ln(1 - r^2) = -lambda + ln(2 - e^-lambda), stable at every level.
double log_one_minus_r2(double level) {
    return -level + std::log(2.0 - std::exp(-level));
}

// --- closed continuation: mean of |1-z|^{-a} over the circle -------------
//
// (1/2pi) int |1 - r e^{i t}|^{-a} dt = 2F1(a/2, a/2; 1; r^2).  For levels
// past the quadrature regime, y = 1 - r^2 is ~2 e^-lambda and the
// connection formula at y applies; a = 1 is the complete elliptic K and
// a in {2, 4} are rational in y.

bool hl_closed_supported(double a) {
    if (a == 1.0 || a == 2.0 || a == 4.0) return true;
    return std::fabs(a - std::round(a)) > 1e-9;  // non-integer exponents
}

// Sign of Gamma(x) for real non-pole x: positive on (0, inf), alternating
// on the negative unit intervals.
int gamma_sign(double x) {
    if (x > 0.0) return 1;
    const long long m = static_cast<long long>(std::floor(x));
    return m % 2 == 0 ? 1 : -1;
}

// Returns ln of the mean.  Every branch works in log space so the
// continuation stays finite even where the mean itself overflows double
// (a * level beyond ~709, reached by lp/norm probes on slowly decaying
// weights).
double hl_abs_pow_closed_log(double a, double level) {
    const double lny = log_one_minus_r2(level);
    if (a == 1.0) {
        // (2/pi) K(r); K = ln(4/k') + (k'^2/4)(ln(4/k') - 1) + O(k'^4 ln).
        const double lead = std::log(4.0) - 0.5 * lny;
        const double y = std::exp(lny);
        return std::log((2.0 / 3.141592653589793238462643383279502884) *
                        (lead + 0.25 * y * (lead - 1.0)));
    }
    if (a == 2.0) return -lny;  // 1/(1-x)
    if (a == 4.0) {
        // (1+x)/(1-x)^3 with x = r^2.
        const double y = std::exp(lny);
        return std::log(2.0 - y) - 3.0 * lny;
    }
    const double s = 0.5 * a;
    const double y = std::exp(lny);
    // 2F1(s,s;1;x) = G(1-2s)/G(1-s)^2 * F1(y)
    //              + G(2s-1)/G(s)^2 * y^{1-2s} * F2(y),
    // F1 = sum (s)_m^2/((2s)_m m!) y^m, F2 likewise with s -> 1-s.  The two
    // terms are combined through their logs and signs: for a < 1 the first
    // dominates (bounded mean), for a > 1 the second (y^{1-2s} growth).
    const double f1 = 1.0 + (s * s / (2.0 * s)) * y;
    const double f2 = 1.0 + ((1.0 - s) * (1.0 - s) / (2.0 - 2.0 * s)) * y;
    const double la = std::lgamma(1.0 - 2.0 * s) -
                      2.0 * std::lgamma(1.0 - s) + std::log(f1);
    const int sa = gamma_sign(1.0 - 2.0 * s);
    const double lb = std::lgamma(2.0 * s - 1.0) - 2.0 * std::lgamma(s) +
                      (1.0 - 2.0 * s) * lny + std::log(f2);
    const int sb = gamma_sign(2.0 * s - 1.0);
    const double hi = std::max(la, lb), lo = std::min(la, lb);
    const int shi = la >= lb ? sa : sb, slo = la >= lb ? sb : sa;
    if (shi < 0)
        throw NumericalFailure(
            "mp_mean: closed HL continuation lost its sign (a = " +
            std::to_string(a) + ")");
    return hi + std::log1p(double(shi * slo) * std::exp(lo - hi));
}

// --- HL quadrature regime ------------------------------------------------

// |cos((k-1)pi/2 + k phi)| from (cos phi, sin phi) directly.  Going through
// atan2 + cos would turn the ~1 ulp absolute rounding of the angle into
// unbounded *relative* noise where phi ~ pi/2 (theta between 1-r and
// sqrt(1-r)); the adaptive panels then chase that noise and never converge.
// Integer complex powers use only multiplications, so the relative error
// stays at a few ulp.  The quarter-turn prefactor reduces to |Re| for odd k
// and |Im| for even k.
double hl_re_amp(int k, double cphi, double sphi) {
    std::complex<double> b(cphi, sphi), acc(1.0, 0.0);
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1) acc *= b;
        b *= b;
    }
    return k % 2 == 1 ? std::fabs(acc.real()) : std::fabs(acc.imag());
}

// Dyadic panel boundaries 0 < ... < pi/4 < pi/2 < pi with the smallest
// panel of width <= (1-r)/8.
std::vector<double> hl_panel_points(double level) {
    const double pi = 3.141592653589793238462643383279502884;
    const double min_width = std::exp(-level) / 8.0;
    std::vector<double> pts{0.0};
    std::vector<double> desc;
    double t = pi;
    while (t > min_width && desc.size() < 2048) {
        desc.push_back(t);
        t *= 0.5;
    }
    desc.push_back(t);
    for (std::size_t i = desc.size(); i-- > 0;) pts.push_back(desc[i]);
    return pts;  // {0, t_min, ..., pi/2, pi}
}

// (1/pi) int_0^pi h(theta) dtheta for the HL integrands, which are even.
template <class H>
double hl_mean_quad(H&& h, double level, const QuadOptions& opt) {
    const auto pts = hl_panel_points(level);
    Accum acc;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc.add(integrate(h, pts[i], pts[i + 1], opt));
    return acc.total() / 3.141592653589793238462643383279502884;
}

// ln of the mean of |1-z|^{-a} in the quadrature regime.  The integrand is
// scaled by e^{-a lambda} (i.e. written against D e^{2 lambda} = 1 + q) so
// its values stay in [0, 1]; the factor comes back as a * level on the log.
double hl_abs_pow_quad_log(double a, double level, const QuadOptions& opt) {
    const double r = -std::expm1(-level);
    const double e2l = std::exp(2.0 * level);
    auto h = [&](double th) {
        const double s = std::sin(0.5 * th);
        const double q = 4.0 * r * s * s * e2l;
        return std::exp(-0.5 * a * std::log1p(q));
    };
    return a * level + std::log(hl_mean_quad(h, level, opt));
}

// ln of the mean of |1-z|^{-a}: quadrature to kMeanQuadLevelMax unless the
// closed continuation (valid past level 42) can serve.
double hl_abs_pow_log(double a, double level, const QuadOptions& opt) {
    if (level > 42.0 && hl_closed_supported(a))
        return hl_abs_pow_closed_log(a, level);
    if (level > kMeanQuadLevelMax)
        throw NumericalFailure(
            "mp_mean: integer HL exponent a = " + std::to_string(a) +
            " has no continuation past level 300");
    return hl_abs_pow_quad_log(a, level, opt);
}

// ln of the mean of |Re f|^p for f = HLExtremal(k) in the quadrature
// regime, with the same e^{-a lambda} scaling as hl_abs_pow_quad_log.
double hl_re_pow_quad_log(int k, double p, double level,
                          const QuadOptions& opt) {
    const double r = -std::expm1(-level);
    const double el = std::exp(level);
    const double e2l = std::exp(2.0 * level);
    const double a = k * p;
    auto h = [&](double th) {
        const double s = std::sin(0.5 * th);
        const double q = 4.0 * r * s * s * e2l;
        const double sd = std::sqrt(1.0 + q);
        // cos/sin of phi = -arg(1-z), via e^lambda (1 - r cos th)
        // = 1 + 2 r sin^2(th/2) e^lambda; never through the angle itself.
        const double cphi = (1.0 + 2.0 * r * s * s * el) / sd;
        const double sphi = r * std::sin(th) * el / sd;
        const double amp = hl_re_amp(k, cphi, sphi);
        if (amp == 0.0) return 0.0;
        return std::exp(-0.5 * a * std::log1p(q) + p * std::log(amp));
    };
    return a * level + std::log(hl_mean_quad(h, level, opt));
}

double hl_re_pow_log(int k, double p, double level, const QuadOptions& opt) {
    if (level <= kMeanQuadLevelMax)
        return hl_re_pow_quad_log(k, p, level, opt);
    if (k == 1 && p == 1.0) return 0.0;  // positive harmonic, mean value 1
    const double a = k * p;
    if (a <= 0.9 || a == 1.0) {
        // Bounded mean (Re f in h^p for p <= 1/k); settled to ~e^-30 or
        // better by level 300, so freeze that value.  The frozen entry is
        // always computed at a fixed tolerance so the cache does not depend
        // on which caller fills it first.
        thread_local std::map<std::pair<int, double>, double> frozen;
        const auto key = std::make_pair(k, p);
        auto it = frozen.find(key);
        if (it == frozen.end()) {
            QuadOptions fixed;
            fixed.rel_tol = 1e-12;
            it = frozen
                     .emplace(key, hl_re_pow_quad_log(k, p,
                                                      kMeanQuadLevelMax,
                                                      fixed))
                     .first;
        }
        return it->second;
    }
    throw NumericalFailure(
        "mp_mean: real-part HL mean has no continuation past level 300 for "
        "k*p > 1 (and none for k*p in (0.9,1))");
}

// --- Taylor quadrature ---------------------------------------------------

template <class H>
double taylor_mean_quad(H&& h, const QuadOptions& opt) {
    const double pi = 3.141592653589793238462643383279502884;
    Accum acc;
    for (int i = 0; i < 8; ++i)
        acc.add(integrate(h, 0.25 * pi * i, 0.25 * pi * (i + 1), opt));
    return acc.total() / (2.0 * pi);
}

double taylor_pow(const TestFunction& f, Target target, double p, double level,
                  const QuadOptions& opt) {
    const double r = -std::expm1(-level);
    auto h = [&](double th) {
        const std::complex<double> z = std::polar(r, th);
        const std::complex<double> v = target == Target::Derivative
                                           ? f.derivative(z)
                                           : f.value(z);
        const double m =
            target == Target::RealPart ? std::fabs(v.real()) : std::abs(v);
        if (m == 0.0) return 0.0;
        return std::exp(p * std::log(m));
    };
    return taylor_mean_quad(h, opt);
}

// --- dispatch ------------------------------------------------------------

double dilate_level(double level, double rho) {
    // 1 - rho r = (1-rho) + rho e^-lambda.
    return -std::log((1.0 - rho) + rho * std::exp(-level));
}

// ln(M_p^p).  Identically-zero targets give -inf, which exponentiates back
// to 0 in every caller.
double mean_pow_log_impl(const TestFunction& f, Target target, double p,
                         double level, const QuadOptions& opt) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    switch (f.kind()) {
        case Kind::Monomial: {
            const int n = f.degree();
            // log r can be -inf at level 0; guard every n * log r product
            // whose exact coefficient is zero.
            const double lnr = std::log1p(-std::exp(-level));
            switch (target) {
                case Target::Full:
                    return n == 0 ? 0.0 : double(n) * p * lnr;
                case Target::RealPart:
                    // |Re z^n| = r^n |cos n theta| for n >= 1; Re z^0 = 1.
                    if (n == 0) return 0.0;
                    return std::log(cos_power_mean(p)) + double(n) * p * lnr;
                case Target::Derivative:
                    if (n == 0) return kNegInf;
                    return p * std::log(double(n)) +
                           (n > 1 ? double(n - 1) * p * lnr : 0.0);
            }
            return kNegInf;
        }
        case Kind::HLExtremal: {
            const int k = f.order();
            switch (target) {
                case Target::Full:
                    return hl_abs_pow_log(k * p, level, opt);
                case Target::Derivative:
                    return p * std::log(double(k)) +
                           hl_abs_pow_log((k + 1) * p, level, opt);
                case Target::RealPart:
                    return hl_re_pow_log(k, p, level, opt);
            }
            return kNegInf;
        }
        case Kind::Taylor: {
            const double v = taylor_pow(f, target, p, level, opt);
            return v == 0.0 ? kNegInf : std::log(v);
        }
        case Kind::Dilate: {
            const double inner = dilate_level(level, f.rho());
            const double base =
                mean_pow_log_impl(f.base(), target, p, inner, opt);
            if (target == Target::Derivative)
                return p * std::log(f.rho()) + base;
            return base;
        }
    }
    return kNegInf;
}

// --- p = infinity: sampled maxima ---------------------------------------

double abs_target(const TestFunction& f, Target target, double r, double th) {
    const std::complex<double> z = std::polar(r, th);
    const std::complex<double> v =
        target == Target::Derivative ? f.derivative(z) : f.value(z);
    return target == Target::RealPart ? std::fabs(v.real()) : std::abs(v);
}

// HL evaluation in the level form, usable when r -> 1.
double hl_abs_target(int k, Target target, double level, double th) {
    const double r = -std::expm1(-level);
    const double core = std::exp(-2.0 * level);
    const double eml = std::exp(-level);
    const double s = std::sin(0.5 * th);
    const double D = core + 4.0 * r * s * s;
    if (target == Target::Full) return std::exp(-0.5 * k * std::log(D));
    if (target == Target::Derivative)
        return double(k) * std::exp(-0.5 * (k + 1) * std::log(D));
    const double sd = std::sqrt(D);
    const double cphi = (eml + 2.0 * r * s * s) / sd;
    const double sphi = r * std::sin(th) / sd;
    return hl_re_amp(k, cphi, sphi) * std::exp(-0.5 * k * std::log(D));
}

double sampled_max(const std::function<double(double)>& g,
                   const std::vector<double>& samples) {
    // Ternary refinement around each local maximum of the sample sweep.
    double best = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = g(samples[i]);
        if (v > best) best = v;
        const bool lmax =
            (i == 0 || v >= g(samples[i - 1])) &&
            (i + 1 == samples.size() || v >= g(samples[i + 1]));
        if (!lmax) continue;
        double lo = samples[i == 0 ? 0 : i - 1];
        double hi = samples[std::min(i + 1, samples.size() - 1)];
        for (int it = 0; it < 60 && hi - lo > 0.0; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (g(m1) < g(m2)) lo = m1;
            else hi = m2;
        }
        best = std::max(best, g(0.5 * (lo + hi)));
    }
    return best;
}

double mean_inf_impl(const TestFunction& f, Target target, double level) {
    switch (f.kind()) {
        case Kind::Monomial: {
            const int n = f.degree();
            const double lnr = std::log1p(-std::exp(-level));
            if (target == Target::Derivative)
                return n == 0 ? 0.0
                              : double(n) * std::exp(double(n - 1) * lnr);
            return std::exp(double(n) * lnr);  // max|cos| = 1
        }
        case Kind::HLExtremal: {
            const int k = f.order();
            if (target == Target::Full) return std::exp(double(k) * level);
            if (target == Target::Derivative)
                return double(k) * std::exp(double(k + 1) * level);
            // |Re f| peaks within a boundary-distance-scaled neighborhood
            // of theta = 0: sample log-spaced angles plus a coarse sweep.
            std::vector<double> samples;
            const double pi = 3.141592653589793238462643383279502884;
            const double lo = std::max(std::exp(-level - 4.0), 1e-300);
            const int nlog = 512, nlin = 512;
            samples.push_back(0.0);
            for (int i = 0; i <= nlog; ++i)
                samples.push_back(
                    lo * std::exp(std::log(pi / lo) * double(i) / nlog));
            for (int i = 1; i < nlin; ++i)
                samples.push_back(pi * double(i) / nlin);
            std::sort(samples.begin(), samples.end());
            auto g = [&](double th) {
                return hl_abs_target(k, target, level, th);
            };
            return sampled_max(g, samples);
        }
        case Kind::Taylor: {
            const double pi = 3.141592653589793238462643383279502884;
            const double r = -std::expm1(-level);
            std::vector<double> samples(4097);
            for (int i = 0; i <= 4096; ++i)
                samples[i] = 2.0 * pi * double(i) / 4096.0;
            auto g = [&](double th) { return abs_target(f, target, r, th); };
            return sampled_max(g, samples);
        }
        case Kind::Dilate: {
            const double inner = dilate_level(level, f.rho());
            const double base = mean_inf_impl(f.base(), target, inner);
            return target == Target::Derivative ? f.rho() * base : base;
        }
    }
    return 0.0;
}

}  // namespace

double cos_power_mean(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw ParameterError("cos_power_mean: need finite p > 0");
    thread_local std::map<double, double> cache;
    const auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    const double pi = 3.141592653589793238462643383279502884;
    QuadOptions opt;
    opt.rel_tol = 1e-13;
    const double v =
        integrate([p](double u) { return std::exp(p * std::log(std::cos(u))); },
                  0.0, 0.5 * pi, opt) *
        2.0 / pi;
    cache.emplace(p, v);
    return v;
}

double mp_mean_pow_log(const TestFunction& f, Target target, double p,
                       double level, const QuadOptions& opt) {
    check_mean_args(p, level);
    return mean_pow_log_impl(f, target, p, level, opt);
}

double mp_mean_pow(const TestFunction& f, Target target, double p,
                   double level, const QuadOptions& opt) {
    check_mean_args(p, level);
    return std::exp(mean_pow_log_impl(f, target, p, level, opt));
}

double mp_mean(const TestFunction& f, Target target, double p, double level,
               const QuadOptions& opt) {
    if (std::isinf(p) && p > 0.0) {
        if (!(level >= 0.0) || !std::isfinite(level))
            throw ParameterError("mp_mean: need finite level >= 0");
        return mean_inf_impl(f, target, level);
    }
    check_mean_args(p, level);
    return std::exp(mean_pow_log_impl(f, target, p, level, opt) / p);
}

MeanProfile mean_profile(const TestFunction& f, Target target, double p,
                         const std::vector<double>& grid,
                         const QuadOptions& opt) {
    if (grid.empty()) throw ParameterError("mean_profile: empty grid");
    check_mean_args(p, grid.front());
    MeanProfile prof;
    prof.p = p;
    prof.target = target;
    prof.grid = grid;
    double prev = -1.0;
    for (double l : grid) {
        if (!(l >= 0.0) || !std::isfinite(l) || !(l > prev))
            throw ParameterError(
                "mean_profile: grid must be strictly ascending levels >= 0");
        prev = l;
        prof.mp_pow.push_back(
            std::exp(mean_pow_log_impl(f, target, p, l, opt)));
    }
    return running_sup(std::move(prof));
}

MeanProfile running_sup(MeanProfile profile) {
    profile.sup_env.assign(profile.mp_pow.size(), 0.0);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < profile.mp_pow.size(); ++i) {
        best = std::max(best, profile.mp_pow[i]);
        profile.sup_env[i] = best;
    }
    return profile;
}

}  // namespace bwl
