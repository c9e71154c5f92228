#pragma once

// Block weight of the second counterexample: density 1 on the radius blocks
// [r_{2n+1}, r_{2n+2}], n >= 1, where r_x = 1 - 2^(-x psi(x)) for an
// increasing unbounded psi with a growth certificate psi(x+1)-psi(x) <= C/x.
// In the level coordinate the block edges are lambda(x) = x psi(x) ln 2,
// exact short products, so every tail reduces to finite sums of
// e^(-lambda(odd)) - e^(-lambda(even)) pieces with superexponential decay.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bwl/profile.hpp"

namespace bwl::t7 {

struct Psi {
    std::function<double(double)> eval;  // psi(x), x >= 1
    double growth_C = 0.0;               // certificate constant
    std::string name;
};

// psi(x) = log2(x+1) with C = 2, the instance used by the block weight.
Psi builtin_psi();

// Lattice check of the certificate: psi increasing and
// psi(x+1) - psi(x) <= C/x for x in {1, ..., xmax}.
bool certificate_ok(const Psi& psi, std::uint32_t xmax = 10000);

// Level of r_x: lambda(x) = x psi(x) ln 2.
double radius_level(double x, const Psi& psi);
double radius_level(double x);  // builtin psi

// Normalized spacing ratio (3.6)/(3.7):
// ((1-r_x)/(1-r_{x+1})) / 2^psi(x+1) = 2^(x (psi(x+1)-psi(x))) in [1, 2^C].
double spacing_ratio(double x, const Psi& psi);

// Piecewise machinery for one psi.  All functions are pure; the builtin
// geometry is a shared const instance.
class Geometry {
  public:
    explicit Geometry(Psi psi);

    double block_lo(std::uint32_t n) const;  // lambda(2n+1)
    double block_hi(std::uint32_t n) const;  // lambda(2n+2)
    double block_mass(std::uint32_t n) const;  // d_n = r_{2n+2} - r_{2n+1}
    double gap_tail(std::uint32_t n) const;    // G_n = sum_{j>=n} d_j

    double density(double lambda) const;            // 1 on blocks, else 0
    double dr_density_lambda(double lambda) const;  // e^-lambda on blocks
    double tail_hat(double lambda) const;
    double tilde_tail(double lambda) const;

    // omega-tilde doubling witness: tilde(r_{2n+2}) / tilde(2 r_{2n+2} - 1),
    // i.e. T~(b_n) / T~(b_n - ln 2); decreasing toward 0.
    double witness(std::uint32_t n) const;

    // e^log_scale * integral of r^x (1-r)^beta omega(r) dr.
    double moment_log_scaled(double x, double beta, double log_scale) const;
    double moment(double x) const { return moment_log_scaled(x, 0.0, 0.0); }
    double log_moment() const;

    // Functionals of the shifted weight omega(r)(1-r)^beta: the block
    // pieces generalize from e^-lambda to e^-(1+beta)lambda, still in
    // closed per-block form.
    double shifted_tail(double lambda, double beta) const;
    double shifted_tilde(double lambda, double beta) const;
    double shifted_log_moment(double beta) const;

    std::vector<double> breakpoints(double lo, double hi) const;
    std::vector<double> witness_levels() const;

    const Psi& psi() const { return psi_; }

  private:
    Psi psi_;
};

const Geometry& builtin();

// Profile of int_r^1 phi(t) dt / ((1-r) phi(r)) for phi(r) =
// 2^(-C1 psi(1/(1-r))) over the level grid; the proof's phi-regularity.
RatioProfile phi_regularity(double C1, const Psi& psi,
                            const std::vector<double>& grid);

}  // namespace bwl::t7
