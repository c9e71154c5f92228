#include <cmath>

#include "bwl/errors.hpp"
#include "bwl/level.hpp"
#include "bwl/theorem7.hpp"
#include "doctest.h"

namespace t7 = bwl::t7;

namespace {
double rel(double got, double want) {
    return std::fabs(got / want - 1.0);
}
}  // namespace

TEST_CASE("psi certificate and radius levels") {
    auto psi = t7::builtin_psi();
    CHECK(psi.growth_C == 2.0);
    CHECK(t7::certificate_ok(psi));
    // Violating certificate: psi too steep for its claimed constant.
    t7::Psi bad{[](double x) { return x; }, 0.5, "linear"};
    CHECK_FALSE(t7::certificate_ok(bad));

    CHECK(t7::radius_level(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // r_1 = 1/2, r_2 = 8/9, r_4 = 1 - 5^-4.
    CHECK(bwl::Level::from_lambda(t7::radius_level(1.0)).r() ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bwl::Level::from_lambda(t7::radius_level(2.0)).one_minus_r() ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(bwl::Level::from_lambda(t7::radius_level(4.0)).one_minus_r() ==
          doctest::Approx(std::pow(5.0, -4.0)).epsilon(1e-14));
    CHECK_THROWS_AS(t7::radius_level(0.5), bwl::ParameterError);
}

TEST_CASE("spacing ratio stays in the certificate band") {
    auto psi = t7::builtin_psi();
    // x = 1: 2^(log2 3 - 1) = 3/2 exactly.
    CHECK(rel(t7::spacing_ratio(1.0, psi), 1.5) < 1e-14);
    // x = 50: (52/51)^50 in closed form.
    CHECK(rel(t7::spacing_ratio(50.0, psi), std::pow(52.0 / 51.0, 50.0)) <
          1e-12);
    const double cap = std::exp2(psi.growth_C);
    double prev = 0.0;
    for (int x = 1; x <= 50; ++x) {
        const double v = t7::spacing_ratio(double(x), psi);
        CHECK(v >= 1.0);
        CHECK(v <= cap);
        CHECK(v > prev);  // increasing toward 2^(log2 e) < 2^C
        prev = v;
    }
}

TEST_CASE("block geometry and masses") {
    const auto& g = t7::builtin();
    CHECK(rel(g.block_lo(1), 3.0 * std::log(4.0)) < 1e-15);
    CHECK(rel(g.block_hi(1), 4.0 * std::log(5.0)) < 1e-15);
    // d_1 = 1/64 - 1/625 and d_2 = 6^-5 - 7^-6 exactly.
    CHECK(rel(g.block_mass(1), 0.014025) < 1e-14);
    CHECK(rel(g.block_mass(2), 0.00012010096329295340289) < 1e-14);
    CHECK(rel(g.gap_tail(1), 0.014145555532627886532) < 1e-14);
    CHECK(g.density(5.0) == 1.0);   // inside block 1 = [4.1589, 6.4378]
    CHECK(g.density(4.0) == 0.0);
    CHECK(g.density(7.0) == 0.0);   // gap before block 2 at 10.75
    CHECK(g.dr_density_lambda(5.0) == doctest::Approx(std::exp(-5.0)));
}

TEST_CASE("tail_hat pieces and junction continuity") {
    const auto& g = t7::builtin();
    CHECK(rel(g.tail_hat(0.0), 0.014145555532627886532) < 1e-14);
    CHECK(rel(g.tail_hat(4.0), 0.014145555532627886532) < 1e-14);
    const double mid = 0.5 * (g.block_lo(1) + g.block_hi(1));
    CHECK(rel(g.tail_hat(mid), 0.003520555532627886532) < 1e-12);
    for (std::uint32_t n : {1u, 2u, 3u}) {
        // Branch agreement at the block edges, both formulas evaluated.
        CHECK(rel(g.tail_hat(g.block_lo(n)), g.gap_tail(n)) < 1e-13);
        CHECK(rel(g.tail_hat(g.block_hi(n) - 1e-12), g.gap_tail(n + 1)) <
              1e-9);
        // Straddle: no jump beyond slope * width.
        const double h = 1e-9;
        CHECK(std::fabs(g.tail_hat(g.block_lo(n) - h) -
                        g.tail_hat(g.block_lo(n) + h)) < 3e-9);
        CHECK(std::fabs(g.tail_hat(g.block_hi(n) - h) -
                        g.tail_hat(g.block_hi(n) + h)) < 3e-9);
    }
    CHECK(g.tail_hat(800.0) == 0.0);
}

TEST_CASE("tilde tail and the decreasing witnesses") {
    const auto& g = t7::builtin();
    CHECK(rel(g.tilde_tail(t7::radius_level(2.0)), 0.0388061601032045908) <
          1e-13);
    // Fubini inside the family: log_moment = moment(0) + tilde(0).
    CHECK(rel(g.log_moment(), g.moment(0.0) + g.tilde_tail(0.0)) < 1e-13);
    CHECK(rel(g.log_moment(), 0.0840326779121968) < 1e-12);

    CHECK(rel(g.witness(1), 0.412787504139) < 1e-11);
    CHECK(rel(g.witness(2), 0.367654301816) < 1e-11);
    CHECK(rel(g.witness(3), 0.33197163633) < 1e-11);
    CHECK(rel(g.witness(4), 0.303166216419) < 1e-11);
    // First n with witness below 0.1 is 32.
    CHECK(g.witness(31) >= 0.1);
    CHECK(rel(g.witness(32), 0.0984863332825) < 1e-11);
    // Precision guard: lambda(2n+3) beyond 700 ln 2.
    CHECK_NOTHROW(g.witness(50));
    CHECK_THROWS_AS(g.witness(51), bwl::ParameterError);

    // Proof display: tilde(r_{2n+2}) within a factor-4 band of
    // psi(2n+3) 2^(-(2n+3) psi(2n+3)).
    for (std::uint32_t n = 1; n <= 8; ++n) {
        const double x = 2.0 * n + 3.0;
        const double scale =
            std::log2(x + 1.0) * std::exp(-t7::radius_level(x));
        const double band = g.tilde_tail(g.block_hi(n)) / scale;
        CHECK(band > 0.25);
        CHECK(band < 4.0);
    }
    // T~ slope is -tail_hat (central difference at generic points).
    for (double lam : {1.0, 5.0, 12.0, 20.0}) {
        const double h = 1e-6;
        const double num =
            (g.tilde_tail(lam - h) - g.tilde_tail(lam + h)) / (2.0 * h);
        CHECK(std::fabs(num - g.tail_hat(lam)) < 1e-6);
    }
}

TEST_CASE("moments of the block weight") {
    const auto& g = t7::builtin();
    CHECK(rel(g.moment(0.0), 0.014145555532627886532) < 1e-12);
    CHECK(rel(g.moment(1.0), 0.01402475698705243) < 1e-11);
    CHECK(rel(g.moment(2.0), 0.01390522864260759) < 1e-11);
    CHECK(rel(g.moment(33.0), 0.01075565833330416) < 1e-11);
    // Scaled path coheres with the bare one where both are representable.
    CHECK(rel(g.moment_log_scaled(5.0, 1.0, 3.0),
              std::exp(3.0) * g.moment_log_scaled(5.0, 1.0, 0.0)) < 1e-13);
    CHECK_THROWS_AS(g.moment(-2.0), bwl::ParameterError);
}

TEST_CASE("breakpoints and witness levels") {
    const auto& g = t7::builtin();
    auto pts = g.breakpoints(0.0, 12.0);
    // a_1 = 3 ln 4, b_1 = 4 ln 5, a_2 = 5 ln 6, b_2 = 6 ln 7 = 11.68 < 12.
    REQUIRE(pts.size() == 4);
    CHECK(pts[0] == g.block_lo(1));
    CHECK(pts[1] == g.block_hi(1));
    CHECK(pts[2] == g.block_lo(2));
    CHECK(pts[3] == g.block_hi(2));
    CHECK(g.witness_levels().size() == 6);
    CHECK(g.witness_levels()[0] == g.block_hi(1));
    CHECK(g.witness_levels()[5] == g.block_hi(32));
}

TEST_CASE("phi regularity profile") {
    auto psi = t7::builtin_psi();
    std::vector<double> grid;
    for (int i = 0; i <= 39; ++i) grid.push_back(1.0 + double(i));
    auto prof = t7::phi_regularity(1.0, psi, grid);
    REQUIRE(prof.values.size() == grid.size());
    CHECK(prof.kind == bwl::ProfileKind::Regularity);
    CHECK(prof.param == 1.0);
    // Closed form at C1 = 1: (u - log(1+u)) (1+u) / u^2, u = e^-lambda.
    // The difference cancels for small u, so switch to the series
    // (u - log(1+u))/u^2 = 1/2 - u/3 + u^2/4 - ... there.
    auto closed = [](double u) {
        double core;
        if (u > 1e-3) {
            core = (u - std::log1p(u)) / (u * u);
        } else {
            core = 0.5 +
                   u * (-1.0 / 3.0 +
                        u * (0.25 + u * (-0.2 + u * (1.0 / 6.0 - u / 7.0))));
        }
        return core * (1.0 + u);
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = std::exp(-grid[i]);
        const double want = closed(u);
        CHECK(rel(prof.values[i], want) < 1e-9);
        CHECK(prof.values[i] <= 1.0);   // proof's upper bound
        CHECK(prof.values[i] > 0.25);   // proof's lower bound at C1 C2 = 1
    }
    CHECK(rel(prof.values[0], 0.55204009300801) < 1e-9);
    CHECK(prof.summary.sup <= 1.0);
    // Band ratio stays tame across the window (criterion-5 shape).
    CHECK(prof.summary.sup / prof.summary.inf < 1.2);

    // Constant perturbation of psi cancels exactly in the ratio.
    t7::Psi shifted{[](double x) { return std::log2(x + 1.0) + 5.0; }, 2.0,
                    "log2+5"};
    auto prof2 = t7::phi_regularity(1.0, shifted, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(rel(prof2.values[i], prof.values[i]) < 1e-10);

    CHECK_THROWS_AS(t7::phi_regularity(-1.0, psi, grid), bwl::ParameterError);
}
