#pragma once

// Radial weights on the unit disc and their core functionals, all in the
// level coordinate lambda = -ln(1-r).  Six families: lebesgue, standard
// (1-r)^alpha, the rapidly increasing v_alpha, the two step constructions
// (t3 with spiked cubic block widths, t7 with psi-spaced blocks), and the
// shift wrapper omega(r)(1-r)^beta.  Every family carries closed or
// closed-sum tails; quadrature backs only the rapidv moments and the
// shifted-rapidv tails.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bwl/quadrature.hpp"

namespace bwl {

enum class Family { Lebesgue, Standard, RapidV, LogStep, BlockStep, Shifted };

const char* to_string(Family f);

// Selects d-mu among omega(r)dr, omega-tilde(r)dr, omega(r) r dr.
enum class MeasureKind { OmegaDr, TildeDr, OmegaRDr };

const char* to_string(MeasureKind m);

class Weight;
using WeightPtr = std::shared_ptr<const Weight>;

class Weight {
  public:
    virtual ~Weight() = default;

    virtual Family family() const = 0;
    // Grammar form, e.g. "rapidv:3" or "shift(t3,1)"; parse_weight(name())
    // reconstructs an equivalent weight.
    virtual std::string name() const = 0;
    // True when tail_hat is closed-form or closed-sum (no quadrature).
    virtual bool exact_tail() const = 0;

    // omega(r) at level lambda.  May overflow to +inf for the e^lambda-sized
    // densities past lambda ~ 709; integrate with dr_density_lambda instead.
    virtual double density(double lambda) const = 0;
    // omega(r) dr/dlambda = omega(r) e^-lambda, the density of omega(r)dr in
    // lambda.  Bounded for every family here.
    virtual double dr_density_lambda(double lambda) const = 0;

    // omega-hat(lambda) = int omega(s) ds over s in [r, 1).
    virtual double tail_hat(double lambda) const = 0;

    // Whether omega-tilde = omega-hat/(1-r) is integrable (equivalently,
    // log_moment is finite).
    virtual bool tilde_integrable() const = 0;
    // int omega-tilde(s) ds over [r, 1); throws DivergentWeight when
    // tilde_integrable() is false.
    virtual double tilde_hat(double lambda) const = 0;

    // omega_x = int r^x omega(r) dr, x >= 0.
    virtual double moment(double x) const = 0;
    // e^log_scale * int r^x (1-r)^beta omega(r) dr, folded into the
    // integrand so huge-x ratios stay representable.
    virtual double moment_log_scaled(double x, double beta,
                                     double log_scale) const = 0;

    // int omega(s) log(e/(1-s)) ds, or nullopt when it diverges.
    virtual std::optional<double> log_moment() const = 0;

    // Density discontinuities (as levels) inside [lo, hi].
    virtual std::vector<double> breakpoints(double lo, double hi) const = 0;
    // Preferred probe levels for doubling diagnostics; empty for smooth
    // families (callers fall back to dyadic windows).
    virtual std::vector<double> witness_levels() const = 0;

    // The weight omega(r)(1-r)^beta; Standard and Lebesgue merge the
    // exponent instead of wrapping.
    virtual WeightPtr shift(double beta) const = 0;
};

WeightPtr lebesgue();
WeightPtr standard(double alpha);  // (1-r)^alpha, alpha > -1
WeightPtr rapidv(double alpha);    // (1-r)^-1 (log e/(1-r))^-alpha, alpha > 1
WeightPtr log_step();              // Theorem 3 step weight
WeightPtr block_step();            // Theorem 7 block weight, builtin psi

// Mini-grammar:
//   lebesgue | standard:<a> | rapidv:<a> | t3 | t7[:psi=log2]
//   | shift(<spec>,<beta>)
WeightPtr parse_weight(const std::string& spec);

// Density of d-mu in the level coordinate: OmegaDr -> omega e^-lambda,
// TildeDr -> omega-hat(lambda), OmegaRDr -> omega e^-lambda r.
double measure_density_lambda(const Weight& w, MeasureKind m, double lambda);

struct RadialIntegralOptions {
    double lambda_max = 80.0;
    // Caller-certified bound on sup |g| over lambda > lambda_max; NaN means
    // "no bound", which fails certification.
    double g_tail_bound = std::numeric_limits<double>::quiet_NaN();
    double tail_rel_tol = 1e-8;
    QuadOptions quad{};
};

// int g d-mu over [0,1), evaluated per breakpoint cell on [0, lambda_max]
// in ascending order; the remainder is certified against
// g_tail_bound * (measure mass beyond lambda_max) or TailNotCertified.
double radial_integral(const std::function<double(double)>& g_level,
                       const Weight& w, MeasureKind m,
                       const RadialIntegralOptions& opt = {});

}  // namespace bwl
