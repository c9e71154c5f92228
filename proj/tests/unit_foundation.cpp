#include <cmath>
#include <numbers>
#include <vector>

#include "bwl/accum.hpp"
#include "bwl/errors.hpp"
#include "bwl/level.hpp"
#include "bwl/probes.hpp"
#include "bwl/quadrature.hpp"
#include "doctest.h"

using namespace bwl;

TEST_CASE("compensated accumulation survives cancellation") {
    Accum a;
    a.add(1.0);
    for (int i = 0; i < 10; ++i) a.add(1e-17);
    a.add(-1.0);
    CHECK(a.total() == doctest::Approx(1e-16).epsilon(1e-12));

    std::vector<double> v{1e100, 1.0, -1e100, 1.0};
    CHECK(compensated_sum(v.begin(), v.end()) == 2.0);
}

TEST_CASE("level coordinate round-trips and guards") {
    auto l = Level::from_r(0.75);
    CHECK(l.lambda == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(l.r() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(l.one_minus_r() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(Level::from_lambda(3.0).log_factor() == 4.0);

    // Deep levels keep full precision in 1-r even though r rounds to 1.
    auto deep = Level::from_lambda(200.0);
    CHECK(deep.one_minus_r() == doctest::Approx(std::exp(-200.0)).epsilon(1e-14));

    CHECK_THROWS_AS(Level::from_r(1.0), ParameterError);
    CHECK_THROWS_AS(Level::from_r(-0.1), ParameterError);
    CHECK_THROWS_AS(Level::from_lambda(-1.0), ParameterError);
}

TEST_CASE("log_spaced endpoints are pinned and grid merge dedups") {
    auto g = log_spaced(0.01, 60.0, 256);
    CHECK(g.size() == 256);
    CHECK(g.front() == 0.01);
    CHECK(g.back() == 60.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    // Geometric spacing: ratio of consecutive points is constant.
    const double q = g[1] / g[0];
    CHECK(g[100] / g[99] == doctest::Approx(q).epsilon(1e-12));

    auto merged = merge_grid({1.0, 2.0, 3.0}, {2.0, 2.5});
    CHECK(merged == std::vector<double>{1.0, 2.0, 2.5, 3.0});
}

TEST_CASE("gk15 integrates degree-13 polynomials exactly") {
    auto f = [](double x) {
        double p = 1.0;
        for (int k = 0; k < 13; ++k) p *= x;
        return p;  // x^13
    };
    auto est = gk15(f, 0.0, 1.0);
    CHECK(est.value == doctest::Approx(1.0 / 14.0).epsilon(1e-15));
}

TEST_CASE("adaptive integrate hits analytic values") {
    const double pi = std::numbers::pi;
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 50.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // Interior sqrt kink at x = 0.3 (the shape |Re f|^p panels produce).
    const double kink = (2.0 / 3.0) *
                        (std::pow(0.3, 1.5) + std::pow(0.7, 1.5));
    CHECK(integrate([](double x) { return std::sqrt(std::fabs(x - 0.3)); },
                    0.0, 1.0) == doctest::Approx(kink).epsilon(1e-11));
}

TEST_CASE("integrate_cells splits at supplied breakpoints") {
    auto f = [](double x) { return std::fabs(x - 0.3) < 1e-300 ? 0.0 : 1.0; };
    std::vector<double> pts{0.0, 0.3, 1.0};
    CHECK(integrate_cells(f, pts) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lambda tail transform captures polynomial tails exactly") {
    // integral over [0, inf) of (1+lambda)^-2 = 1.
    auto f = [](double lam) {
        const double u = 1.0 + lam;
        return 1.0 / (u * u);
    };
    CHECK(integrate_lambda_tail(f, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // integral over [5, inf) of (1+lambda)^-3 = 1/(2*36).
    auto g = [](double lam) {
        const double u = 1.0 + lam;
        return 1.0 / (u * u * u);
    };
    CHECK(integrate_lambda_tail(g, 5.0) ==
          doctest::Approx(1.0 / 72.0).epsilon(1e-12));
}

TEST_CASE("improper probe separates convergent from divergent tails") {
    // Exponential decay: convergent.
    auto conv = probe_improper([](double x) { return std::exp(-x); },
                               kProbeCuts);
    CHECK_FALSE(conv.divergent);
    CHECK(conv.partials.back() == doctest::Approx(1.0).epsilon(1e-12));

    // Constant positive integrand: linearly divergent.
    auto div = probe_improper([](double) { return 1.0; }, kProbeCuts);
    CHECK(div.divergent);

    // Log-divergent tail 1/(1+x): increments are ~ln 2 each doubling.
    auto logdiv = probe_improper([](double x) { return 1.0 / (1.0 + x); },
                                 kProbeCuts);
    CHECK(logdiv.divergent);

    // (1+x)^-2 tail: increments ratio ~1/2, convergent.
    auto quad = probe_improper(
        [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); }, kProbeCuts);
    CHECK_FALSE(quad.divergent);
}
