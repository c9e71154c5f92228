#include "bwl/theorem3.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bwl/accum.hpp"
#include "bwl/errors.hpp"
#include "bwl/mathx.hpp"
#include "bwl/quadrature.hpp"

namespace bwl::t3 {
namespace {

// Indices 2 .. kCacheTop+1 are served from backward-recurrence caches; beyond
// that the Euler-Maclaurin forms below are already accurate to ~1e-25.
constexpr std::uint64_t kCacheTop = 1200;

// Spike positions n = 2^(2^j).  j = 6 sits at 2^64, one past uint64 range, so
// positions are kept as doubles (all are exact powers of two).  j >= 7 lies
// below 2^-256 and is dropped everywhere.
struct Spike {
    int j;
    double n;
};
constexpr std::array<Spike, 6> kSpikes{{{1, 4.0},
                                        {2, 16.0},
                                        {3, 256.0},
                                        {4, 65536.0},
                                        {5, 4294967296.0},
                                        {6, 18446744073709551616.0}}};

double spike_delta(const Spike& s) { return s.j / (s.n * s.n); }

// sum_{k >= a} k^-3, a >= ~50.  Euler-Maclaurin through the B4 term; the
// first dropped term is ~0.15 a^-10.
double zeta3_tail(double a) {
    const double i = 1.0 / a;
    const double i2 = i * i;
    return i2 *
           (0.5 + i * (0.5 + i * (0.25 + i2 * (-1.0 / 12.0 + i2 / 12.0))));
}

// sum_{k >= a} k^-2.
double zeta2_tail(double a) {
    const double i = 1.0 / a;
    const double i2 = i * i;
    return i *
           (1.0 + i * (0.5 + i * (1.0 / 6.0 + i2 * (-1.0 / 30.0 + i2 / 42.0))));
}

// sum_{k >= a} k^-6.
double zeta6_tail(double a) {
    const double i = 1.0 / a;
    const double i2 = i * i;
    const double i5 = i2 * i2 * i;
    return i5 * (0.2 + i * (0.5 + i * (0.5 + i2 * (-7.0 / 15.0 + i2))));
}

double phi_d(double n) {
    double v = 1.0 / (n * n * n);
    for (const auto& s : kSpikes)
        if (s.n == n) v += spike_delta(s);
    return v;
}

double S_direct(double m) {
    double v = zeta3_tail(m);
    for (const auto& s : kSpikes)
        if (s.n >= m) v += spike_delta(s);
    return v;
}

// U(k) = sum_{n>=k} S(n+1).  Off-spike part by Abel summation:
// sum_{n>=k} sum_{m>=n+1} m^-3 = sum_{m>k} (m-k) m^-3.
double U_direct(double k) {
    double v = zeta2_tail(k + 1.0) - k * zeta3_tail(k + 1.0);
    for (const auto& s : kSpikes)
        if (s.n >= k + 1.0) v += spike_delta(s) * (s.n - k);
    return v;
}

double Q_direct(double m) {
    double v = zeta6_tail(m);
    for (const auto& s : kSpikes)
        if (s.n >= m) {
            const double d = spike_delta(s);
            const double c = 1.0 / (s.n * s.n * s.n);
            v += d * (d + 2.0 * c);  // phi^2 - c^2 at the spike
        }
    return v;
}

struct Caches {
    std::array<double, kCacheTop + 2> s{}, u{}, q{};
    Caches() {
        s[kCacheTop + 1] = S_direct(double(kCacheTop) + 1.0);
        u[kCacheTop + 1] = U_direct(double(kCacheTop) + 1.0);
        q[kCacheTop + 1] = Q_direct(double(kCacheTop) + 1.0);
        for (std::uint64_t m = kCacheTop; m >= 2; --m) {
            const double p = phi_d(double(m));
            s[m] = s[m + 1] + p;
            u[m] = u[m + 1] + s[m + 1];
            q[m] = q[m + 1] + p * p;
        }
    }
};

const Caches& caches() {
    static const Caches c;
    return c;
}

double S_of(double m) {
    if (m <= double(kCacheTop) + 1.0)
        return caches().s[std::uint64_t(m)];
    return S_direct(m);
}

double U_of(double k) {
    if (k <= double(kCacheTop) + 1.0)
        return caches().u[std::uint64_t(k)];
    return U_direct(k);
}

double Q_of(double m) {
    if (m <= double(kCacheTop) + 1.0)
        return caches().q[std::uint64_t(m)];
    return Q_direct(m);
}

// T~ at the left edge of block k.  Abel summation of the gap/block profile
// of omega-hat collapses the series to cached quantities.
double tilde_at_block_start(double k) {
    const double p = phi_d(k);
    return U_of(k) + p * S_of(k + 1.0) + p * p - Q_of(k) / 2.0;
}

// T~ at the integer level k (end of block k-1 / start of the gap before
// block k).
double tilde_at_integer(double k) {
    return tilde_at_block_start(k) + S_of(k) * (1.0 - phi_d(k));
}

void check_level(double lambda, const char* who) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ParameterError(std::string(who) +
                             ": level must be finite and >= 0");
}

void check_beta(double beta, const char* who) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ParameterError(std::string(who) +
                             ": beta must be finite and >= 0");
}

// Mass of block n under the beta-shifted measure:
// int e^-beta*u du over [n+1-phi(n), n+1].
double shifted_block_mass(double n, double beta) {
    return std::exp(-beta * (n + 1.0)) * std::expm1(beta * phi_d(n)) / beta;
}

// The e^-beta*n series decay geometrically with ratio >= e^-beta, so the
// remainder after a term t is below ~2t/beta for small beta and ~1.6t for
// beta >= 1; this floor keeps it under 1e-17 of the total either way.
bool shifted_series_done(double term, double total, double beta) {
    return term == 0.0 || term <= 5e-18 * total * std::min(1.0, beta);
}

// G_k(beta) = sum over blocks n >= k of the shifted block mass.
double shifted_gap_sum(double k, double beta) {
    Accum acc;
    double n = k;
    for (std::uint64_t steps = 0;; n += 1.0, ++steps) {
        const double term = shifted_block_mass(n, beta);
        acc.add(term);
        if (shifted_series_done(term, acc.total(), beta)) break;
        if (steps > 2000000)
            throw NumericalFailure(
                "shifted_tail: series converges too slowly (beta too small)");
    }
    return acc.total();
}

// Shifted T~ at the left edge of block k.  Fubini over the double sum
// "each block integral of shifted omega-hat plus following gap piece"
// telescopes the gap factors: sum_{m=k}^{n-1} (phi(m)+1-phi(m+1)) equals
// n-k+phi(k)-phi(n), so every term is positive and no residual gap sum is
// carried by subtraction (which would stall below its truncation floor).
double shifted_tilde_at_block_start(double k, double beta) {
    const double pk = phi_d(k);
    Accum acc;
    double n = k;
    for (std::uint64_t steps = 0;; n += 1.0, ++steps) {
        const double p = phi_d(n);
        double term =
            std::exp(-beta * (n + 1.0)) * expm1m(beta * p) / (beta * beta);
        if (n > k) term += shifted_block_mass(n, beta) * (n - k + pk - p);
        acc.add(term);
        if (n > k && shifted_series_done(term, acc.total(), beta)) break;
        if (steps > 2000000)
            throw NumericalFailure(
                "shifted_tilde: series converges too slowly (beta too small)");
    }
    return acc.total();
}

}  // namespace

double phi(std::uint64_t n) {
    if (n < 2) throw ParameterError("phi: block index must be >= 2");
    return phi_d(double(n));
}

double block_start(std::uint64_t n) {
    return double(n) + 1.0 - phi(n);
}

double S(std::uint64_t m) {
    if (m < 2) throw ParameterError("S: index must be >= 2");
    return S_of(double(m));
}

double U(std::uint64_t k) {
    if (k < 2) throw ParameterError("U: index must be >= 2");
    return U_of(double(k));
}

double Q(std::uint64_t k) {
    if (k < 2) throw ParameterError("Q: index must be >= 2");
    return Q_of(double(k));
}

double dr_density_lambda(double lambda) {
    check_level(lambda, "dr_density_lambda");
    const double k = std::floor(lambda);
    if (k < 2.0 || k > 9e18) return 0.0;
    return (lambda - k >= 1.0 - phi_d(k)) ? 1.0 : 0.0;
}

double density(double lambda) {
    const double d = dr_density_lambda(lambda);
    return d == 0.0 ? 0.0 : std::exp(lambda);  // may overflow to +inf
}

double tail_hat(double lambda) {
    check_level(lambda, "tail_hat");
    const double k = std::floor(lambda);
    if (k < 2.0) return S_of(2.0);
    const double sk = k + 1.0 - phi_d(k);
    if (lambda <= sk) return S_of(k);            // gap before block k
    return S_of(k + 1.0) + (k + 1.0 - lambda);   // inside block k
}

double tilde_tail(double lambda) {
    check_level(lambda, "tilde_tail");
    if (lambda <= 2.0)
        return tilde_at_integer(2.0) + S_of(2.0) * (2.0 - lambda);
    const double k = std::floor(lambda);
    const double pk = phi_d(k);
    const double sk = k + 1.0 - pk;
    if (lambda <= sk)
        return tilde_at_block_start(k) + S_of(k) * (sk - lambda);
    const double e = (k + 1.0) - lambda;  // in [0, phi(k))
    return tilde_at_integer(k + 1.0) + S_of(k + 1.0) * e + 0.5 * e * e;
}

Witness witness(int j) {
    if (j < 1 || j > 4)
        throw ParameterError("witness: spike index must lie in [1,4]");
    const std::uint64_t n = std::uint64_t(1) << (std::uint64_t(1) << j);
    return {n, 1.0 + phi(n) / S(n + 1)};
}

Requirements requirements(std::uint64_t kmax) {
    if (kmax < 4 || kmax > 65536)
        throw ParameterError("requirements: kmax must lie in [4, 65536]");
    Requirements out;
    out.kmax = kmax;
    out.sup_tail_ratio = 0.0;
    out.sup_width_ratio = 0.0;
    out.arg_tail_ratio = out.arg_width_ratio = 4;
    out.widths_below_half = true;
    for (std::uint64_t k = 4; k <= kmax; ++k) {
        const double p = phi(k);
        if (!(p < 0.5)) out.widths_below_half = false;
        const double a = S(k) / U(k);
        if (a > out.sup_tail_ratio) {
            out.sup_tail_ratio = a;
            out.arg_tail_ratio = k;
        }
        const double b = p / U(k + 1);
        if (b > out.sup_width_ratio) {
            out.sup_width_ratio = b;
            out.arg_width_ratio = k;
        }
    }
    for (const auto& s : kSpikes) {
        if (s.n > double(kmax)) break;
        const auto n = std::uint64_t(s.n);
        const double p = phi(n);
        const double t = S(n + 1);
        out.spikes.push_back({s.j, n, t / p, p / t});
    }
    return out;
}

double moment_log_scaled(double x, double beta, double log_scale) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw ParameterError("moment: x must be finite and >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ParameterError("moment: beta must be finite and >= 0");
    const double m = x > 1.0 ? std::log(x) : 0.0;
    const std::uint64_t n_lo =
        m > 11.0 ? std::uint64_t(m - 9.0) : std::uint64_t(2);
    const std::uint64_t n_hi = std::uint64_t(m) + 46;
    QuadOptions opt;
    opt.rel_tol = 1e-12;
    Accum acc;
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
        const double p = phi_d(double(n));
        const double E = std::exp(-(double(n) + 1.0));  // 1-r at block end
        // Largest log-integrand on the block (r^x peaks at the right edge,
        // the exponential factor gains at most beta*phi across it).
        const double top =
            x * std::log1p(-E) + log_scale - beta * (double(n) + 1.0) +
            beta * p;
        if (top < -760.0) continue;  // underflows to zero identically
        // Integrate in u = (n+1) - lambda.  Block widths (~n^-3) sit far
        // below one ulp of lambda (~n), so integrating in lambda directly
        // would lose ~7 digits of the width; in u the edges are exact.
        auto f = [x, beta, log_scale, E, n](double u) {
            return std::exp(x * std::log1p(-E * std::exp(u)) + log_scale -
                            beta * (double(n) + 1.0 - u));
        };
        acc.add(integrate(f, 0.0, p, opt));
    }
    // Beyond n_hi the factor r^x is 1 - O(e^-46); sum the block masses of
    // e^-beta*lambda dlambda in closed form per block.
    if (beta == 0.0) {
        acc.add(S(n_hi + 1) * std::exp(log_scale));
    } else {
        std::uint64_t n = n_hi + 1;
        for (std::uint64_t steps = 0;; ++n, ++steps) {
            if (steps > 2000000)
                throw NumericalFailure(
                    "moment: shifted far tail converges too slowly "
                    "(beta too small)");
            const double p = phi(n);
            const double term =
                std::exp(log_scale - beta * (double(n) + 1.0)) *
                std::expm1(beta * p) / beta;
            acc.add(term);
            const double floor_scale =
                std::max(1e-17 * std::fabs(acc.total()), 1e-320);
            // Remaining blocks are bounded by S(n+1) e^{-beta(n+2-1/2)}.
            if (S(n + 1) * std::exp(log_scale - beta * (double(n) + 1.5)) <
                floor_scale)
                break;
        }
    }
    return acc.total();
}

double moment(double x, double beta) {
    return moment_log_scaled(x, beta, 0.0);
}

double log_moment() {
    // omega_0 + sum_n phi(n)(n+1) - sum_n phi(n)^2/2.  The middle series
    // splits into (zeta(2)-1) + (zeta(3)-1) off the spikes plus
    // sum_j j (s_j+1)/s_j^2 on them.
    constexpr double kZeta3 = 1.2020569031595942854;
    constexpr double kPi2Over6 = 1.6449340668482264365;
    double spikes = 0.0;
    for (auto it = kSpikes.rbegin(); it != kSpikes.rend(); ++it)
        spikes += double(it->j) * (it->n + 1.0) / (it->n * it->n);
    return S_of(2.0) + (kPi2Over6 - 1.0) + (kZeta3 - 1.0) + spikes -
           Q_of(2.0) / 2.0;
}

double shifted_tail(double lambda, double beta) {
    check_level(lambda, "shifted_tail");
    check_beta(beta, "shifted_tail");
    if (beta == 0.0) return tail_hat(lambda);
    const double k = std::floor(lambda);
    if (k < 2.0) return shifted_gap_sum(2.0, beta);
    const double sk = k + 1.0 - phi_d(k);
    if (lambda <= sk) return shifted_gap_sum(k, beta);
    return std::exp(-beta * (k + 1.0)) *
               std::expm1(beta * (k + 1.0 - lambda)) / beta +
           shifted_gap_sum(k + 1.0, beta);
}

double shifted_tilde(double lambda, double beta) {
    check_level(lambda, "shifted_tilde");
    check_beta(beta, "shifted_tilde");
    if (beta == 0.0) return tilde_tail(lambda);
    double k = std::floor(lambda);
    if (k < 2.0) k = 2.0;  // everything below block 2 is gap
    const double sk = k + 1.0 - phi_d(k);
    if (lambda <= sk)
        return shifted_tilde_at_block_start(k, beta) +
               shifted_gap_sum(k, beta) * (sk - lambda);
    const double e = (k + 1.0) - lambda;
    const double gn = shifted_gap_sum(k + 1.0, beta);
    const double tnext = shifted_tilde_at_block_start(k + 1.0, beta) +
                         gn * (1.0 - phi_d(k + 1.0));
    return tnext +
           std::exp(-beta * (k + 1.0)) * expm1m(beta * e) / (beta * beta) +
           gn * e;
}

double shifted_log_moment(double beta) {
    check_beta(beta, "shifted_log_moment");
    if (beta == 0.0) return log_moment();
    Accum acc;
    double n = 2.0;
    for (std::uint64_t steps = 0;; n += 1.0, ++steps) {
        const double p = phi_d(n);
        const double a = n + 1.0 - p;
        // int (1+u) e^-beta*u du over the block, arranged with both parts
        // positive (the naive antiderivative difference cancels 1/beta).
        const double term =
            std::exp(-beta * (n + 1.0)) *
            (std::expm1(beta * p) * (1.0 + a) / beta +
             expm1m(beta * p) / (beta * beta));
        acc.add(term);
        if (shifted_series_done(term, acc.total(), beta)) break;
        if (steps > 2000000)
            throw NumericalFailure(
                "shifted_log_moment: series converges too slowly");
    }
    return acc.total();
}

std::vector<double> breakpoints(double lo, double hi) {
    check_level(lo, "breakpoints");
    check_level(hi, "breakpoints");
    std::vector<double> out;
    if (hi < lo || hi < 2.0) return out;
    if (hi - std::max(lo, 2.0) > 2e6)
        throw ParameterError("breakpoints: range spans too many blocks");
    const auto n0 = std::uint64_t(std::max(lo, 2.0));
    for (std::uint64_t n = std::max<std::uint64_t>(n0, 2); double(n) <= hi;
         ++n) {
        const double a = block_start(n);
        const double b = double(n) + 1.0;
        if (a >= lo && a <= hi) out.push_back(a);
        if (b >= lo && b <= hi) out.push_back(b);
    }
    return out;
}

std::vector<double> witness_levels() {
    // Block-start levels a_n = n+1-phi(n) at n = 2 and the spikes n = 2^(2^j).
    // A window [a_n, a_n + ln K] with ln K >= phi(n) straddles the whole block,
    // so the doubling ratio there equals S(n)/S(n+1) = 1 + phi(n)/S(n+1)
    // independently of K; at integer levels the flat gap would hide the spike
    // from any K < e^{1 - phi(n)}.
    return {block_start(2.0), block_start(4.0), block_start(16.0),
            block_start(256.0), block_start(65536.0)};
}

}  // namespace bwl::t3
