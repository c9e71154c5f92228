#include "bwl/theorem7.hpp"

#include <cmath>
#include <utility>

#include "bwl/accum.hpp"
#include "bwl/errors.hpp"
#include "bwl/mathx.hpp"
#include "bwl/quadrature.hpp"

namespace bwl::t7 {
namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_level(double lambda, const char* who) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ParameterError(std::string(who) +
                             ": level must be finite and >= 0");
}

}  // namespace

Psi builtin_psi() {
    return {[](double x) { return std::log2(x + 1.0); }, 2.0, "log2"};
}

bool certificate_ok(const Psi& psi, std::uint32_t xmax) {
    if (!psi.eval) return false;
    double prev = psi.eval(1.0);
    if (!(prev > 0.0)) return false;
    for (std::uint32_t x = 1; x <= xmax; ++x) {
        const double next = psi.eval(double(x) + 1.0);
        if (!(next > prev)) return false;
        if (!(next - prev <= psi.growth_C / double(x) + 1e-15)) return false;
        prev = next;
    }
    return true;
}

double radius_level(double x, const Psi& psi) {
    if (!(x >= 1.0) || !std::isfinite(x))
        throw ParameterError("radius_level: x must be finite and >= 1");
    return x * psi.eval(x) * kLn2;
}

double radius_level(double x) {
    if (!(x >= 1.0) || !std::isfinite(x))
        throw ParameterError("radius_level: x must be finite and >= 1");
    return x * std::log2(x + 1.0) * kLn2;
}

double spacing_ratio(double x, const Psi& psi) {
    if (!(x >= 1.0) || !std::isfinite(x))
        throw ParameterError("spacing_ratio: x must be finite and >= 1");
    return std::exp2(x * (psi.eval(x + 1.0) - psi.eval(x)));
}

Geometry::Geometry(Psi psi) : psi_(std::move(psi)) {
    if (!psi_.eval) throw ParameterError("Geometry: psi must be evaluable");
}

double Geometry::block_lo(std::uint32_t n) const {
    if (n < 1) throw ParameterError("Geometry: block index must be >= 1");
    return radius_level(2.0 * double(n) + 1.0, psi_);
}

double Geometry::block_hi(std::uint32_t n) const {
    if (n < 1) throw ParameterError("Geometry: block index must be >= 1");
    return radius_level(2.0 * double(n) + 2.0, psi_);
}

// No cancellation: the edges are at least ~2 apart in lambda, so the
// difference of exponentials keeps full precision.
double Geometry::block_mass(std::uint32_t n) const {
    return std::exp(-block_lo(n)) - std::exp(-block_hi(n));
}

double Geometry::gap_tail(std::uint32_t n) const {
    if (n < 1) throw ParameterError("Geometry: block index must be >= 1");
    Accum acc;
    for (std::uint32_t j = n;; ++j) {
        const double d = block_mass(j);
        acc.add(d);
        if (d == 0.0 || d <= 1e-16 * acc.total()) break;
        if (j > n + 2000)
            throw NumericalFailure("gap_tail: block masses fail to decay");
    }
    return acc.total();
}

namespace {

struct Pos {
    std::uint32_t n;  // block at or after lambda
    bool in_block;
};

Pos locate(const Geometry& g, double lambda) {
    std::uint32_t lo = 1, hi = 1;
    while (g.block_hi(hi) <= lambda) {
        lo = hi + 1;
        hi *= 2;
        if (hi > (1u << 26))
            throw ParameterError("t7: level beyond supported range");
    }
    while (lo < hi) {
        const std::uint32_t mid = lo + (hi - lo) / 2;
        if (g.block_hi(mid) > lambda)
            hi = mid;
        else
            lo = mid + 1;
    }
    return {lo, lambda >= g.block_lo(lo)};
}

}  // namespace

double Geometry::density(double lambda) const {
    check_level(lambda, "density");
    const auto p = locate(*this, lambda);
    return p.in_block ? 1.0 : 0.0;
}

double Geometry::dr_density_lambda(double lambda) const {
    check_level(lambda, "dr_density_lambda");
    const auto p = locate(*this, lambda);
    return p.in_block ? std::exp(-lambda) : 0.0;
}

double Geometry::tail_hat(double lambda) const {
    check_level(lambda, "tail_hat");
    if (lambda > 760.0) return 0.0;  // every remaining mass underflows
    const auto p = locate(*this, lambda);
    if (!p.in_block) return gap_tail(p.n);
    return (std::exp(-lambda) - std::exp(-block_hi(p.n))) +
           gap_tail(p.n + 1);
}

namespace {

// T~ at the left edge of block n: full block pieces
//   int over block m of omega-hat = d_m + (G_{m+1} - e^-b_m)(b_m - a_m)
// plus the following gap piece G_{m+1} (a_{m+1} - b_m), summed over m >= n
// with the certificate-backed superexponential truncation.
double tilde_at_block_start(const Geometry& g, std::uint32_t n) {
    Accum acc;
    for (std::uint32_t m = n;; ++m) {
        const double am = g.block_lo(m);
        const double bm = g.block_hi(m);
        const double g1 = g.gap_tail(m + 1);
        const double piece = g.block_mass(m) +
                             (g1 - std::exp(-bm)) * (bm - am) +
                             g1 * (g.block_lo(m + 1) - bm);
        acc.add(piece);
        if (piece == 0.0 || piece <= 1e-16 * acc.total()) break;
        if (m > n + 2000)
            throw NumericalFailure("tilde_tail: pieces fail to decay");
    }
    return acc.total();
}

}  // namespace

double Geometry::tilde_tail(double lambda) const {
    check_level(lambda, "tilde_tail");
    if (lambda > 760.0) return 0.0;
    const auto p = locate(*this, lambda);
    if (!p.in_block)
        return tilde_at_block_start(*this, p.n) +
               gap_tail(p.n) * (block_lo(p.n) - lambda);
    const double bn = block_hi(p.n);
    const double g1 = gap_tail(p.n + 1);
    const double tb = tilde_at_block_start(*this, p.n + 1) +
                      g1 * (block_lo(p.n + 1) - bn);
    const double e = bn - lambda;
    return tb + (std::exp(-lambda) - std::exp(-bn)) - std::exp(-bn) * e +
           g1 * e;
}

double Geometry::witness(std::uint32_t n) const {
    if (n < 1) throw ParameterError("witness: index must be >= 1");
    const double x = 2.0 * double(n) + 3.0;
    if (x * psi_.eval(x) > 700.0)
        throw ParameterError(
            "witness: tail underflows in double precision "
            "(lambda(2n+3) > 700 ln 2)");
    const double bn = block_hi(n);
    return tilde_tail(bn) / tilde_tail(bn - kLn2);
}

double Geometry::moment_log_scaled(double x, double beta,
                                   double log_scale) const {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw ParameterError("moment: x must be finite and >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ParameterError("moment: beta must be finite and >= 0");
    const double m = x > 1.0 ? std::log(x) : 0.0;
    const double s = 1.0 + beta;  // dr and the shift together
    QuadOptions opt;
    opt.rel_tol = 1e-12;
    Accum acc;
    std::uint32_t n = 1;
    for (;; ++n) {
        if (n > 100000)
            throw NumericalFailure("moment: block enumeration stalled");
        const double a = block_lo(n);
        if (a > m + 45.0) break;  // r^x = 1 - O(e^-45) from here on
        const double b = block_hi(n);
        // Largest log-integrand on the block sits at the right edge for the
        // r^x factor and the left edge for the exponential one.
        const double top =
            x * std::log1p(-std::exp(-b)) + log_scale - s * a;
        if (top < -760.0) continue;
        auto f = [x, s, log_scale](double lam) {
            return std::exp(x * std::log1p(-std::exp(-lam)) + log_scale -
                            s * lam);
        };
        acc.add(integrate(f, a, b, opt));
    }
    for (;; ++n) {
        const double a = block_lo(n);
        const double b = block_hi(n);
        const double term = std::exp(log_scale - s * a) *
                            (-std::expm1(-s * (b - a))) / s;
        acc.add(term);
        if (term == 0.0 || term <= 1e-16 * std::fabs(acc.total())) break;
        if (n > 200000)
            throw NumericalFailure("moment: far tail fails to decay");
    }
    return acc.total();
}

namespace {

void check_beta(double beta, const char* who) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ParameterError(std::string(who) +
                             ": beta must be finite and >= 0");
}

// Block mass under e^-s*lambda dlambda, s = 1 + beta.
double sblock_mass(const Geometry& g, std::uint32_t n, double s) {
    const double a = g.block_lo(n);
    return std::exp(-s * a) *
           (-std::expm1(-s * (g.block_hi(n) - a))) / s;
}

double sgap_tail(const Geometry& g, std::uint32_t n, double s) {
    Accum acc;
    for (std::uint32_t j = n;; ++j) {
        const double d = sblock_mass(g, j, s);
        acc.add(d);
        if (d == 0.0 || d <= 1e-16 * acc.total()) break;
        if (j > n + 2000)
            throw NumericalFailure("shifted_tail: block masses fail to decay");
    }
    return acc.total();
}

// Shifted T~ at the left edge of block n; same piece pattern as the s = 1
// version, with the in-block integral e^-s*b (e^w - 1 - w)/s^2, w = s(b-a).
double stilde_at_block_start(const Geometry& g, std::uint32_t n, double s) {
    Accum acc;
    for (std::uint32_t m = n;; ++m) {
        const double am = g.block_lo(m);
        const double bm = g.block_hi(m);
        const double g1 = sgap_tail(g, m + 1, s);
        const double w = s * (bm - am);
        const double piece =
            std::exp(-s * bm) * expm1m(w) / (s * s) + g1 * (bm - am) +
            g1 * (g.block_lo(m + 1) - bm);
        acc.add(piece);
        if (piece == 0.0 || piece <= 1e-16 * acc.total()) break;
        if (m > n + 2000)
            throw NumericalFailure("shifted_tilde: pieces fail to decay");
    }
    return acc.total();
}

}  // namespace

double Geometry::shifted_tail(double lambda, double beta) const {
    check_level(lambda, "shifted_tail");
    check_beta(beta, "shifted_tail");
    if (beta == 0.0) return tail_hat(lambda);
    if (lambda > 760.0) return 0.0;
    const double s = 1.0 + beta;
    const auto p = locate(*this, lambda);
    if (!p.in_block) return sgap_tail(*this, p.n, s);
    const double b = block_hi(p.n);
    return std::exp(-s * b) * std::expm1(s * (b - lambda)) / s +
           sgap_tail(*this, p.n + 1, s);
}

double Geometry::shifted_tilde(double lambda, double beta) const {
    check_level(lambda, "shifted_tilde");
    check_beta(beta, "shifted_tilde");
    if (beta == 0.0) return tilde_tail(lambda);
    if (lambda > 760.0) return 0.0;
    const double s = 1.0 + beta;
    const auto p = locate(*this, lambda);
    if (!p.in_block)
        return stilde_at_block_start(*this, p.n, s) +
               sgap_tail(*this, p.n, s) * (block_lo(p.n) - lambda);
    const double b = block_hi(p.n);
    const double g1 = sgap_tail(*this, p.n + 1, s);
    const double tb = stilde_at_block_start(*this, p.n + 1, s) +
                      g1 * (block_lo(p.n + 1) - b);
    const double e = b - lambda;
    return tb + std::exp(-s * b) * expm1m(s * e) / (s * s) + g1 * e;
}

double Geometry::shifted_log_moment(double beta) const {
    check_beta(beta, "shifted_log_moment");
    if (beta == 0.0) return log_moment();
    const double s = 1.0 + beta;
    Accum acc;
    for (std::uint32_t n = 1;; ++n) {
        const double a = block_lo(n);
        const double b = block_hi(n);
        // int (1+u) e^-s*u du, antiderivative -e^-s*u ((1+u)/s + 1/s^2);
        // the edges are >= 2 apart so the difference keeps full precision.
        const double term =
            std::exp(-s * a) * ((1.0 + a) / s + 1.0 / (s * s)) -
            std::exp(-s * b) * ((1.0 + b) / s + 1.0 / (s * s));
        acc.add(term);
        if (term == 0.0 || term <= 1e-16 * acc.total()) break;
        if (n > 2000)
            throw NumericalFailure("log_moment: terms fail to decay");
    }
    return acc.total();
}

double Geometry::log_moment() const {
    // int (1+lambda) e^-lambda dlambda per block, antiderivative
    // -(2+lambda) e^-lambda.
    Accum acc;
    for (std::uint32_t n = 1;; ++n) {
        const double a = block_lo(n);
        const double b = block_hi(n);
        const double term =
            (2.0 + a) * std::exp(-a) - (2.0 + b) * std::exp(-b);
        acc.add(term);
        if (term == 0.0 || term <= 1e-16 * acc.total()) break;
        if (n > 2000)
            throw NumericalFailure("log_moment: terms fail to decay");
    }
    return acc.total();
}

std::vector<double> Geometry::breakpoints(double lo, double hi) const {
    check_level(lo, "breakpoints");
    check_level(hi, "breakpoints");
    std::vector<double> out;
    for (std::uint32_t n = 1;; ++n) {
        const double a = block_lo(n);
        if (a > hi) break;
        const double b = block_hi(n);
        if (a >= lo) out.push_back(a);
        if (b >= lo && b <= hi) out.push_back(b);
        if (n > (1u << 22))
            throw ParameterError("breakpoints: range spans too many blocks");
    }
    return out;
}

std::vector<double> Geometry::witness_levels() const {
    // Block-end levels b_n at dyadic block indices.  The doubling drop
    // behind b_n (across the block) grows like e^(gap length) ~ n, so
    // consecutive blocks grow it too slowly to call an escape; dyadic
    // indices roughly double it per step.  n = 32 keeps every tail far
    // above underflow (b_32 ~ 277).
    std::vector<double> out;
    for (std::uint32_t n : {1u, 2u, 4u, 8u, 16u, 32u})
        out.push_back(block_hi(n));
    return out;
}

const Geometry& builtin() {
    static const Geometry g(builtin_psi());
    return g;
}

RatioProfile phi_regularity(double C1, const Psi& psi,
                            const std::vector<double>& grid) {
    if (!(C1 > 0.0) || !std::isfinite(C1))
        throw ParameterError("phi_regularity: C1 must be positive");
    if (grid.empty()) throw ParameterError("phi_regularity: empty grid");
    RatioProfile out;
    out.kind = ProfileKind::Regularity;
    out.param = C1;
    out.grid = grid;
    out.values.reserve(grid.size());
    // phi at level l is 2^(-C1 psi(1/(1-r))) = 2^(-C1 psi(e^l)).
    auto phi_at = [&](double l) {
        const double X = std::exp(l);
        return std::exp2(-C1 * psi.eval(X));
    };
    QuadOptions opt;
    opt.rel_tol = 1e-11;
    for (double lam : grid) {
        check_level(lam, "phi_regularity");
        const double den = std::exp(-lam) * phi_at(lam);
        auto f = [&](double l) { return phi_at(l) * std::exp(-l); };
        const double num = integrate_lambda_tail(f, lam, opt);
        if (!(den > 0.0) || !(num > 0.0) || !std::isfinite(num / den))
            throw NumericalFailure(
                "phi_regularity: profile underflows at this level");
        out.values.push_back(num / den);
    }
    out.summary = summarize(out.values);
    return out;
}

}  // namespace bwl::t7
