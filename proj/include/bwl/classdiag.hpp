#pragma once

// Desk-scale diagnostics for the weight classes: the doubling class D-hat
// (omega-hat(r) <= C omega-hat((1+r)/2)), the reverse class D-check
// (omega-hat(r) >= C' omega-hat(1-(1-r)/K) with C' > 1 for some K), the
// moment condition, the tail comparison omega-hat/tilde-omega-hat, and
// pointwise regularity.  Profiles are raw ratio curves over level grids;
// verdicts apply frozen thresholds and report evidence, never proof -- the
// classes are asymptotic and any fixed window can be fooled, so every
// verdict carries its witness points and a note saying what was measured.

#include <vector>

#include "bwl/profile.hpp"
#include "bwl/weight.hpp"

namespace bwl::classdiag {

// `count` log-spaced levels on [lo, hi] with the weight's breakpoints and
// witness levels inside [lo, hi] injected exactly: the extremes of every
// step-weight profile sit at block edges, and a smooth grid would straddle
// them.  Requires 0 < lo < hi and count in [8, 1e6].
std::vector<double> default_grid(const Weight& w, double lo = 0.01,
                                 double hi = 60.0, int count = 256);

// values[i] = omega-hat(l_i) / omega-hat(l_i + ln K), K > 1.  The same raw
// curve serves both doubling classes: D-hat asks for a finite sup, D-check
// asks the ratio to stay above some constant > 1; only the kind tag and the
// verdict rules differ.
RatioProfile dhat_profile(const Weight& w, double K,
                          const std::vector<double>& grid);
RatioProfile dcheck_profile(const Weight& w, double K,
                            const std::vector<double>& grid);

// values[i] = x_i^beta (omega_[beta])_{x_i} / omega_{x_i} over ascending
// moment indices xs > 0, beta > 0; the x^beta factor is folded into the
// shifted moment (moment_log_scaled) so the curve stays representable at
// x ~ e^700 where the bare shifted moment underflows.
RatioProfile moment_condition_profile(const Weight& w, double beta,
                                      const std::vector<double>& xs);

// values[i] = omega-hat(l_i) / tilde-omega-hat(l_i); a bounded sup is the
// evidence that omega-tilde inherits D-hat from omega.  Throws
// DivergentWeight when the tilde tail diverges.
RatioProfile tail_comparison(const Weight& w, const std::vector<double>& grid);

// values[i] = omega(r)(1-r)/omega-hat at l_i, computed as
// dr_density_lambda/tail_hat so the e^lambda-sized densities never
// overflow.  Pinched in (0, inf) for regular weights, exactly 0 on the gap
// levels of the step weights, ~2/L for rapidv.
RatioProfile regularity_profile(const Weight& w,
                                const std::vector<double>& grid);

// Frozen-threshold verdicts (constants in the implementation):
//
//  assess_dhat   EvidenceOut when the doubling drop adjacent to the witness
//                levels grows by >= 25% per scale across >= 3 consecutive
//                scales; else EvidenceIn when the profile sup over
//                [0.01, 60] moves < 1% upon extension to [0.01, 120]; else
//                Inconclusive.  At each witness level the steeper of the
//                two drops omega-hat(l)/omega-hat(l+lnK) and
//                omega-hat(l-lnK)/omega-hat(l) is taken, so both step
//                geometries (mass spike ahead, long gap behind) register.
//  assess_dcheck EvidenceIn when some K in {2, 4, 16, 256} keeps the ratio
//                >= 1.05 over the profile tail (l >= 30), at the dyadic
//                deep probes {60, 120, 240, 480, 960}, and at the weight's
//                own breakpoints in (60, 960] (step weights only look
//                doubling-from-below until a gap longer than ln K appears,
//                which can be far beyond any fixed window).  EvidenceOut
//                when the K = 256 excess ratio-1 decays by >= 25% per
//                scale across >= 3 dyadic scales.  Else Inconclusive.
//  assess_regularity
//                EvidenceIn when the profile is pinched (sup/inf <= 10)
//                on [0.01, 60] and stays pinched on [0.01, 120];
//                EvidenceOut when the density vanishes at >= 3 grid levels
//                (step weights) or the value decays >= 25% per dyadic
//                scale across >= 3 scales (rapidv); else Inconclusive.
//
// Underflowed probes (tail_hat rounding to 0 deep in a standard-type tail)
// are skipped, not treated as evidence.
ClassVerdict assess_dhat(const Weight& w, double K = 2.0);
ClassVerdict assess_dcheck(const Weight& w);
ClassVerdict assess_regularity(const Weight& w);

// True when the two profile sups agree to rel_tol (the grid-extension
// stability rule shared by the verdicts and the acceptance suite).
bool sup_stable(const RatioProfile& base, const RatioProfile& extended,
                double rel_tol = 0.01);

}  // namespace bwl::classdiag
