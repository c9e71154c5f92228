#pragma once

// Step-weight with spiked cubic block widths.  The weight lives on a union of
// blocks in the level coordinate: block n occupies [n+1-phi(n), n+1] with
// density e^lambda there (so omega(r) dr has mass exactly phi(n) per block).
//
//   phi(n) = n^-3            off the spike set,
//   phi(n) = n^-3 + j n^-2   at n = 2^(2^j), j = 1, 2, ...
//
// Everything downstream (tail, tilde tail, witnesses, moments) reduces to the
// three tail series
//
//   S(m) = sum_{n>=m} phi(n),  U(k) = sum_{n>=k} S(n+1),  Q(k) = sum_{m>=k} phi(m)^2,
//
// which we evaluate from cached backward recurrences seeded by Euler-Maclaurin
// expansions of the zeta tails.  Spikes with index beyond the cache are folded
// into the seeds analytically.

#include <cstdint>
#include <vector>

namespace bwl::t3 {

// Block width phi(n), n >= 2.
double phi(std::uint64_t n);

// Level of the left edge of block n: s_n = n + 1 - phi(n).
double block_start(std::uint64_t n);

// Tail sums, valid for any m >= 2 (cache below 1202, direct expansion above).
double S(std::uint64_t m);
double U(std::uint64_t k);
double Q(std::uint64_t k);

// omega(r) at level lambda (0 off blocks, e^lambda on blocks; overflows to
// +inf past lambda ~ 709 -- use dr_density_lambda for integration).
double density(double lambda);

// omega(r) * dr/dlambda = omega(r) e^-lambda: the density of omega(r)dr in
// the level coordinate.  Indicator of the block union; never overflows.
double dr_density_lambda(double lambda);

// omega-hat at level lambda: integral of omega(s) ds over s in [r, 1).
double tail_hat(double lambda);

// tilde tail at level lambda: integral of omega-hat over [r, 1) in r.
double tilde_tail(double lambda);

struct Witness {
  std::uint64_t n;  // spike location 2^(2^j)
  double ratio;     // omega-hat(s_n) / omega-hat(n+1) = 1 + phi(n)/S(n+1)
};

// Doubling witness at spike j, j in [1, 4].
Witness witness(int j);

struct SpikeRatios {
  int j;
  std::uint64_t n;
  double tail_over_spike;  // S(n+1) / phi(n)  (decreasing in j)
  double spike_over_tail;  // phi(n) / S(n+1)  (the divergent orientation)
};

struct Requirements {
  std::uint64_t kmax;
  double sup_tail_ratio;        // sup_k S(k)/U(k)
  std::uint64_t arg_tail_ratio;
  double sup_width_ratio;       // sup_k phi(k)/U(k+1)
  std::uint64_t arg_width_ratio;
  bool widths_below_half;       // phi(k) < 1/2 for every scanned k
  std::vector<SpikeRatios> spikes;  // spikes with n <= kmax
};

// Scan k in [4, kmax]; kmax in [4, 65536].
Requirements requirements(std::uint64_t kmax);

// Integral of r^x (1-r)^beta omega(r) dr over [0,1), x >= 0, beta >= 0.
double moment(double x, double beta = 0.0);

// Same integral times e^log_scale, folded into the integrand so ratios like
// x^beta (omega_[beta])_x / omega_x stay representable at x ~ e^700 where
// the bare shifted moment underflows.
double moment_log_scaled(double x, double beta, double log_scale);

// Integral of omega(s) log(e/(1-s)) ds in closed form: omega_0 plus zeta
// values plus the spike series, independent of tilde_tail (so the Fubini
// identity log_moment = moment(0) + tilde_tail(0) is a genuine cross-check).
double log_moment();

// Functionals of the shifted weight omega(r)(1-r)^beta, beta >= 0, via
// closed per-block sums of e^-beta*lambda (quadrature-free).
double shifted_tail(double lambda, double beta);
double shifted_tilde(double lambda, double beta);
double shifted_log_moment(double beta);

// Block edges (as levels) inside [lo, hi], for quadrature cell lists.
std::vector<double> breakpoints(double lo, double hi);

// Block-start levels a_n at n = 2 and the spikes n = 2^(2^j): probe points
// where a doubling window [a_n, a_n + ln K] straddles the whole block.
std::vector<double> witness_levels();

}  // namespace bwl::t3
