#pragma once

// Analytic test functions on the unit disc: monomials z^n, the
// Hardy-Littlewood extremal family e^{i(k-1)pi/2} (1-z)^{-k}, finite Taylor
// polynomials, and dilates f(rho z).  A TestFunction is an immutable value;
// Dilate holds its base by shared pointer, so copies are cheap.
//
// Evaluation here is the *generic* complex path used for pointwise checks
// and for the Stolz-region lattices (|z| stays away from 1).  The integral
// means in means.hpp never evaluate (1-z) by subtraction near the boundary;
// they use the level-coordinate form of |1-z|^2 instead.

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "bwl/errors.hpp"

namespace bwl::fn {

enum class Kind { Monomial, HLExtremal, Taylor, Dilate };

const char* to_string(Kind k);

class TestFunction {
  public:
    static TestFunction monomial(int n);
    static TestFunction hl_extremal(int k);
    static TestFunction taylor(std::vector<std::complex<double>> coeffs);
    static TestFunction dilate(TestFunction base, double rho);

    Kind kind() const { return kind_; }
    // Monomial degree n.
    int degree() const;
    // HLExtremal order k.
    int order() const;
    // Taylor coefficients (a_0, a_1, ...).
    const std::vector<std::complex<double>>& coeffs() const;
    // Dilate base and factor.
    const TestFunction& base() const;
    double rho() const;

    // f(z), f'(z), f(0).  z must lie in the open disc.
    std::complex<double> value(std::complex<double> z) const;
    std::complex<double> derivative(std::complex<double> z) const;
    std::complex<double> value_at_zero() const;

    // Grammar form, e.g. "monomial:8", "hl:2", "taylor:1,0,0.5i",
    // "dilate(hl:1,0.99)".
    std::string name() const;

  private:
    TestFunction() = default;

    Kind kind_ = Kind::Monomial;
    int n_ = 0;  // Monomial degree or HLExtremal order
    std::vector<std::complex<double>> coeffs_;
    std::shared_ptr<const TestFunction> base_;
    double rho_ = 0.0;
};

// The HL prefactor e^{i(k-1)pi/2} as an exact unit: i^{(k-1) mod 4}.
std::complex<double> hl_prefactor(int k);

// Parses the grammar above; throws ParameterError on malformed input.
TestFunction parse_test_function(const std::string& spec);

}  // namespace bwl::fn
