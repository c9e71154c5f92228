#pragma once

// Integral means M_p(r, g) for g in {f, Re f, f'} over the test-function
// families, in the level coordinate lambda = -ln(1-r).
//
// Evaluation regimes (constants below, rationale in the module tests):
//   * level <= kMeanQuadLevelMax: theta-quadrature.  HL integrands get
//     dyadic panels toward theta = 0 down to width (1-r)/8; monomial angular
//     factors reduce to the |cos|^p mean over one period with panels aligned
//     to the kinks; Taylor functions use plain periodic panels.
//   * level > kMeanQuadLevelMax: closed continuation.  |1-z|^{-a} means are
//     Gauss hypergeometric 2F1(a/2,a/2;1;r^2); with y = 1-r^2 ~ 2 e^-lambda
//     the connection formula at y gives 2-term expansions for non-integer a,
//     the elliptic-K expansion covers a = 1, and a in {2,4} are rational.
//     Bounded real-part means freeze at their (exponentially settled)
//     kMeanQuadLevelMax value; real-part means that still grow past that
//     level have no continuation here and raise NumericalFailure.
//
// mp_mean returns M_p itself (the 1/p-th root); mp_mean_pow returns M_p^p,
// the quantity the norm integrals consume.  p = infinity is served by
// sampled maxima with local parabolic refinement.

#include <vector>

#include "bwl/quadrature.hpp"
#include "bwl/testfn.hpp"

namespace bwl {

enum class Target { Full, RealPart, Derivative };

const char* to_string(Target t);

// Quadrature/continuation boundary; e^-600 is still a normal double, so the
// |1-z|^2 core stays representable throughout the quadrature regime.
inline constexpr double kMeanQuadLevelMax = 300.0;

// c_p = (1/2pi) int_0^{2pi} |cos u|^p du, the monomial real-part angular
// factor (c_2 = 1/2, c_1 = 2/pi).  Cached per p.
double cos_power_mean(double p);

// M_p^p(r, target of f) at the given level; finite p > 0.
double mp_mean_pow(const fn::TestFunction& f, Target target, double p,
                   double level, const QuadOptions& opt = {});

// ln M_p^p, finite even where M_p^p overflows double (HL means grow like
// e^{k p lambda}); -inf for identically-zero targets.  The norm and lp
// integrands combine this with their exponential factors before
// exponentiating, so products like M_p^p(f') e^{-p lambda} stay
// representable at every level a probe can reach.
double mp_mean_pow_log(const fn::TestFunction& f, Target target, double p,
                       double level, const QuadOptions& opt = {});

// M_p(r, target of f); p > 0 or p = infinity (sampled maxima).
double mp_mean(const fn::TestFunction& f, Target target, double p,
               double level, const QuadOptions& opt = {});

struct MeanProfile {
    std::vector<double> grid;    // ascending levels
    std::vector<double> mp_pow;  // M_p^p along the grid
    std::vector<double> sup_env; // running suprema of mp_pow
    double p = 1.0;
    Target target = Target::Full;
};

// Evaluates mp_mean_pow along an ascending level grid and fills the
// running-sup envelope.
MeanProfile mean_profile(const fn::TestFunction& f, Target target, double p,
                         const std::vector<double>& grid,
                         const QuadOptions& opt = {});

// sup_env[i] = max(mp_pow[0..i]); idempotent.
MeanProfile running_sup(MeanProfile profile);

}  // namespace bwl
