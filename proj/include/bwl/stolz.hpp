#pragma once

// Stolz-type regions Gamma(zeta) with interior vertex scaling, and the
// nontangential maximal functional ||N(Re f)||_{L^p_omega} estimated from
// below on deterministic lattices.
//
// N is a supremum, so any finite lattice under-approximates it pointwise;
// maximal_norm is therefore documented as a lower estimate that increases
// with the sampling resolution.  The radial weight mass per zeta-annulus is
// taken from the weight's exact tails (so step weights are integrated
// exactly in the radial coordinate); only the annulus r-factor and the
// angular mean are midpoint-sampled.

#include <complex>

#include "bwl/testfn.hpp"
#include "bwl/weight.hpp"

namespace bwl {

// Membership z in Gamma(zeta) for zeta = (r, theta), 0 < r <= 1:
// |theta - arg z| (wrapped to (-pi, pi]) < (1 - |z|/r)/2.  z = 0 has no
// argument and is defined outside every region.
bool stolz_contains(double zeta_r, double zeta_theta, std::complex<double> z);

struct StolzSampling {
    int zeta_radii = 64;    // polar zeta-grid: radii ...
    int zeta_angles = 128;  // ... x angles
    int region_radii = 32;  // radius samples per Gamma(zeta)
    // Angular sample spacing inside a region <= (1-s)/spacing_divisor at
    // region radius s.
    double spacing_divisor = 8.0;
};

// Lower estimate of ||N(Re f)||_{L^p_omega} = (int_D N(Re f)^p omega dA)^{1/p}
// (dA normalized): per-zeta lattice maxima of |Re f| integrated over the
// polar zeta-grid.
double maximal_norm(const fn::TestFunction& f, const Weight& w, double p,
                    const StolzSampling& sampling = {});

}  // namespace bwl
