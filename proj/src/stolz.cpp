#include "bwl/stolz.hpp"

#include <algorithm>
#include <cmath>

#include "bwl/accum.hpp"
#include "bwl/level.hpp"

namespace bwl {

bool stolz_contains(double zeta_r, double zeta_theta,
                    std::complex<double> z) {
    if (!(zeta_r > 0.0) || !(zeta_r <= 1.0) || !std::isfinite(zeta_theta))
        throw ParameterError("stolz_contains: need zeta with 0 < r <= 1");
    if (z == std::complex<double>{0.0, 0.0}) return false;  // arg undefined
    const double mod = std::abs(z);
    if (!(mod < 1.0))
        throw ParameterError("stolz_contains: z must lie in the open disc");
    const double aperture = 0.5 * (1.0 - mod / zeta_r);
    if (!(aperture > 0.0)) return false;
    const double diff =
        std::remainder(zeta_theta - std::arg(z), 2.0 * 3.141592653589793238462643383279502884);
    return std::fabs(diff) < aperture;
}

namespace {

// Lattice maximum of |Re f| over Gamma(zeta); zeta = rho e^{i theta}.
double lattice_maximum(const fn::TestFunction& f, double rho, double theta,
                       const StolzSampling& sm) {
    double best = 0.0;
    for (int m = 0; m < sm.region_radii; ++m) {
        const double frac = (m + 0.5) / sm.region_radii;
        const double s = rho * frac;
        const double halfw = 0.5 * (1.0 - frac);
        const double spacing = (1.0 - s) / sm.spacing_divisor;
        int na = 2 * int(halfw / spacing) + 1;
        na = std::clamp(na, 3, 4097);
        for (int q = 0; q < na; ++q) {
            const double phi =
                theta + halfw * (2.0 * (q + 0.5) / na - 1.0);
            const double v =
                std::fabs(f.value(std::polar(s, phi)).real());
            if (v > best) best = v;
        }
    }
    return best;
}

}  // namespace

double maximal_norm(const fn::TestFunction& f, const Weight& w, double p,
                    const StolzSampling& sm) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw ParameterError("maximal_norm: need finite p > 0");
    if (sm.zeta_radii < 1 || sm.zeta_angles < 1 || sm.region_radii < 1 ||
        !(sm.spacing_divisor > 0.0))
        throw ParameterError("maximal_norm: bad sampling parameters");
    const double pi = 3.141592653589793238462643383279502884;
    Accum total;
    for (int i = 0; i < sm.zeta_radii; ++i) {
        const double rho = (i + 0.5) / sm.zeta_radii;
        // Exact omega-mass of the annulus [i/Zr, (i+1)/Zr).
        const double lam_lo =
            Level::from_r(double(i) / sm.zeta_radii).lambda;
        const double hi_r = double(i + 1) / sm.zeta_radii;
        const double mass =
            w.tail_hat(lam_lo) -
            (hi_r < 1.0 ? w.tail_hat(Level::from_r(hi_r).lambda) : 0.0);
        if (!(mass > 0.0)) continue;
        Accum angle_acc;
        for (int j = 0; j < sm.zeta_angles; ++j) {
            const double theta = 2.0 * pi * (j + 0.5) / sm.zeta_angles;
            const double n_est = lattice_maximum(f, rho, theta, sm);
            angle_acc.add(n_est == 0.0 ? 0.0
                                       : std::exp(p * std::log(n_est)));
        }
        total.add(rho * mass * angle_acc.total() / sm.zeta_angles);
    }
    const double raw = 2.0 * total.total();
    return raw == 0.0 ? 0.0 : std::exp(std::log(raw) / p);
}

}  // namespace bwl
