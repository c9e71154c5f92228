#pragma once

// Weighted norms of test functions: the Bergman norm ||f||_{A^p_omega}, the
// real-part norm ||Re f||_{L^p_omega}, the Littlewood-Paley functional, and
// the combined conjugate-comparison report.
//
// Every integral runs through one improper-integral probe: partial integrals
// at the level cuts {10, 20, 40, 80}, a divergence test on the increments
// (ratio >= kDivergenceRatio means log-divergence or worse -> DivergentNorm),
// and for convergent integrals doubling continuation chunks with a
// geometric-tail certificate.  Probes report the partials and their
// a + b ln(lambda) fit so divergence evidence can be quoted directly.

#include <array>
#include <functional>

#include "bwl/means.hpp"
#include "bwl/weight.hpp"

namespace bwl {

struct ProbeOptions {
    std::array<double, 4> cuts{10.0, 20.0, 40.0, 80.0};
    double rel_tol = 1e-10;
    // Increment ratio at and above which the integral is declared divergent.
    // A log-divergent integrand gives ratio 1 - O(1/cut) ~ 0.98; the
    // convergent families exercised here stay below ~0.6.  Weights with
    // tail-decay exponent inside (1, 1.2) would land near the fence and are
    // outside the certified range of this probe.
    double divergence_ratio = 0.95;
    int max_chunks = 64;
    // Breakpoint-aware cell splitting is applied to a chunk only when it is
    // at most this wide (step families never reach wider chunks; smooth
    // families have no breakpoints).
    double breakpoint_span_max = 4096.0;
    QuadOptions quad{};
};

struct ImproperProbe {
    bool divergent = false;
    double value = 0.0;                  // NaN when divergent
    std::array<double, 4> partials{};    // integral up to each cut
    double fit_a = 0.0, fit_b = 0.0;     // least squares of partials on ln cut
    double fit_residual = 0.0;           // max |deviation|
    int chunks = 0;                      // continuation chunks consumed
};

// int_0^infty g_pow(l) d-mu(l) for the level-coordinate measure density of
// (w, m); throws NumericalFailure when the tail can neither be certified
// nor declared divergent.
ImproperProbe probe_improper(const std::function<double(double)>& g_pow,
                             const Weight& w, MeasureKind m,
                             const ProbeOptions& opt = {});

// ||f||_{A^p_omega} = (2 int M_p^p(r, f) omega(r) r dr)^{1/p}.
// Throws DivergentNorm when the probe flags divergence.
double bergman_norm(const fn::TestFunction& f, const Weight& w, double p,
                    const ProbeOptions& opt = {});

// ||Re f||_{L^p_omega}, same reduction with the real-part means.
double repart_norm(const fn::TestFunction& f, const Weight& w, double p,
                   const ProbeOptions& opt = {});

// |f(0)|^p + 2 int M_p^p(r, f') (1-r)^e omega(r) r dr (raw value, no root);
// e = derivative_weight_exponent, e.g. e = p for Eq-(1.1)-style functionals.
double lp_functional(const fn::TestFunction& f, const Weight& w, double p,
                     double derivative_weight_exponent,
                     const ProbeOptions& opt = {});

// Quantities assembled by conjugate_report.
enum class CRQuantity {
    NormF = 0,       // ||f||_{A^p_omega}
    NormRe = 1,      // ||Re f||_{L^p_omega}
    SupEnvTilde = 2, // int sup-env M_p^p(Re f) omega-tilde(r) dr
    SupEnvOmega = 3, // int sup-env M_p^p(Re f) omega(r) dr
    LpValue = 4,     // lp_functional with exponent p
};

const char* to_string(CRQuantity q);

struct ConjugateReport {
    double p = 1.0;
    std::array<double, 5> value{};   // indexed by CRQuantity; NaN if divergent
    std::array<bool, 5> divergent{};
    // value[i]/value[j]; NaN when either side is divergent.
    double ratio(CRQuantity i, CRQuantity j) const;
};

// All Theorem-2/4/5 comparison quantities for one (f, w, p).  Divergent
// entries are flagged rather than thrown; the omega-tilde entry is flagged
// up front when the weight's tilde tail is not integrable.
ConjugateReport conjugate_report(const fn::TestFunction& f, const Weight& w,
                                 double p, const ProbeOptions& opt = {});

}  // namespace bwl
