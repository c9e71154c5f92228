#include "bwl/quadrature.hpp"

#include <functional>

#include "bwl/probes.hpp"

namespace bwl {

// Chunked partial integrals of f over [0, cuts.back()] with a geometric-decay
// certificate on the increments.  The paper only dichotomizes convergence of
// the log-moment type integrals; this numeric rule (documented in the module
// docs) declares divergence when the increment ratios at the probe cuts stay
// above kDecayThreshold.  Families near the convergence boundary (tail decay
// slower than about lambda^-1.3 per doubling) are conservatively flagged.
ImproperProbe probe_improper(const std::function<double(double)>& f,
                             const std::vector<double>& cuts,
                             const QuadOptions& opt) {
    ImproperProbe out;
    out.cuts = cuts;
    double lo = 0.0;
    Accum total;
    for (double hi : cuts) {
        const double inc = integrate(f, lo, hi, opt);
        out.increments.push_back(inc);
        total.add(inc);
        out.partials.push_back(total.total());
        lo = hi;
    }
    out.divergent = false;
    const std::size_t n = out.increments.size();
    if (n >= 3) {
        const double i1 = out.increments[n - 3];
        const double i2 = out.increments[n - 2];
        const double i3 = out.increments[n - 1];
        const double scale = std::fabs(out.partials.back());
        if (scale > 0.0 && std::fabs(i3) > 1e-13 * scale) {
            const double r1 = (i1 != 0.0) ? i2 / i1 : 0.0;
            const double r2 = (i2 != 0.0) ? i3 / i2 : 0.0;
            if (std::max(r1, r2) >= kDecayThreshold) out.divergent = true;
        }
    }
    return out;
}

} // namespace bwl
