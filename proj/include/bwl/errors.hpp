#pragma once

#include <stdexcept>
#include <string>

namespace bwl {

// Base class so callers can catch everything from this library at once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument / configuration (CLI exit code 2).
struct ParameterError : Error {
    using Error::Error;
};

// Adaptive machinery failed to reach its tolerance (CLI exit code 3).
struct NumericalFailure : Error {
    using Error::Error;
};

// A requested functional does not exist for this weight,
// e.g. the tilde tail of rapidv:alpha with alpha <= 2.
struct DivergentWeight : Error {
    using Error::Error;
};

// radial_integral could not certify the tail beyond lambda_max.
struct TailNotCertified : Error {
    using Error::Error;
};

// A norm/functional integral whose partial integrals fail the Cauchy test
// (log-divergence or worse), e.g. the A^1 norm of the Hardy-Littlewood
// extremal against rapidv:2.
struct DivergentNorm : Error {
    using Error::Error;
};

} // namespace bwl
