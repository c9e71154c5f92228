#include <cmath>
#include <string>
#include <vector>

#include "bwl/errors.hpp"
#include "bwl/quadrature.hpp"
#include "bwl/theorem3.hpp"
#include "bwl/weight.hpp"
#include "doctest.h"

using namespace bwl;

namespace {

double rel(double got, double want) {
    return std::fabs(got / want - 1.0);
}

std::vector<double> log_levels(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(std::exp(a + (b - a) * i / (n - 1)));
    return out;
}

// r(lambda)^x * e^-lambda, safe at lambda = 0 for x > 0.
double rx_dr(double x, double l) {
    return std::exp(x * std::log1p(-std::exp(-l)) - l);
}

double brute_over(const Weight& w, const std::function<double(double)>& f,
                  double lo, double hi) {
    std::vector<double> cells = w.breakpoints(lo, hi);
    cells.push_back(lo);
    cells.push_back(hi);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    QuadOptions q;
    q.rel_tol = 1e-12;
    return integrate_cells(f, cells, q);
}

}  // namespace

TEST_CASE("closed forms match the worked examples") {
    auto leb = lebesgue();
    // omega-hat of Lebesgue at r = 0.75 is 1 - r = 0.25.
    CHECK(rel(leb->tail_hat(std::log(4.0)), 0.25) < 1e-14);
    CHECK(leb->moment(0.0) == 1.0);
    CHECK(leb->moment(1.0) == 0.5);
    CHECK(*leb->log_moment() == 2.0);

    auto s1 = standard(1.0);
    CHECK(rel(s1->tail_hat(std::log(2.0)), 0.125) < 1e-14);
    CHECK(rel(s1->tilde_hat(0.0), 0.25) < 1e-14);
    CHECK(rel(s1->moment(1.0), 1.0 / 6.0) < 1e-14);
    CHECK(rel(*s1->log_moment(), 0.75) < 1e-14);

    auto s2 = standard(2.0);
    CHECK(rel(s2->density(std::log(2.0)), 0.25) < 1e-14);

    auto v3 = rapidv(3.0);
    CHECK(rel(v3->tail_hat(1.0), 0.125) < 1e-14);
    CHECK(rel(v3->tilde_hat(1.0), 0.25) < 1e-14);
    CHECK(rel(v3->moment(0.0), 0.5) < 1e-11);
    CHECK(rel(v3->moment(1.0), 0.20182631883840296) < 1e-11);
    CHECK(rel(*v3->log_moment(), 1.0) < 1e-14);

    auto v15 = rapidv(1.5);
    CHECK(rel(v15->moment(2.0), 1.34601170741303) < 1e-11);
    CHECK(!v15->tilde_integrable());
    CHECK_THROWS_AS((void)v15->tilde_hat(0.0), DivergentWeight);
    CHECK(!v15->log_moment().has_value());
    CHECK(!rapidv(2.0)->log_moment().has_value());
    CHECK(rel(rapidv(2.5)->moment(0.0), 2.0 / 3.0) < 1e-11);
    CHECK(rel(*rapidv(2.5)->log_moment(), 2.0) < 1e-14);

    auto t3w = log_step();
    CHECK(t3w->density(2.5) == 0.0);  // gap: block 2 sits at [2.875, 3]
    CHECK(rel(t3w->density(2.9), std::exp(2.9)) < 1e-14);
    CHECK(rel(*t3w->log_moment(), 1.5649105696153896123) < 1e-12);
    CHECK(rel(t3w->moment(std::exp(4.0)), 0.1038191071573647845) < 1e-11);

    auto t7w = block_step();
    CHECK(rel(*t7w->log_moment(), 0.0840326779121968) < 1e-12);

    CHECK(rel(standard(2.5)->moment(33.0), 1.2796554500024887e-5) < 1e-12);
    CHECK(rel(standard(2.5)->moment(129.0), 1.283127991700041e-7) < 1e-12);

    // moment_log_scaled folds the e^log_scale factor analytically.
    CHECK(rel(lebesgue()->moment_log_scaled(1.0, 2.0, 0.0), 1.0 / 12.0) <
          1e-13);
    CHECK(rel(standard(0.0)->moment_log_scaled(1.0, 2.0, 3.0),
              std::exp(3.0) / 12.0) < 1e-13);
}

TEST_CASE("density may overflow near the boundary by contract") {
    CHECK(std::isinf(rapidv(3.0)->density(800.0)));
    const double mid710 = 0.5 * (t3::block_start(710) + 711.0);
    CHECK(std::isinf(log_step()->density(mid710)));
}

TEST_CASE("shift merges standard-family weights") {
    auto merged = standard(1.0)->shift(1.0);
    CHECK(merged->family() == Family::Standard);
    CHECK(merged->name() == "standard:2");
    CHECK(rel(merged->moment(1.0), std::exp(std::lgamma(2.0) +
                                            std::lgamma(3.0) -
                                            std::lgamma(5.0))) < 1e-13);

    auto leb_shift = lebesgue()->shift(2.0);
    CHECK(leb_shift->family() == Family::Standard);
    CHECK(leb_shift->name() == "standard:2");
    CHECK(lebesgue()->shift(0.0)->family() == Family::Lebesgue);
    CHECK(rapidv(3.0)->shift(0.0)->family() == Family::RapidV);
    CHECK(log_step()->shift(0.0)->family() == Family::LogStep);

    auto nested = log_step()->shift(1.0)->shift(0.5);
    CHECK(nested->family() == Family::Shifted);
    CHECK(nested->name() == "shift(t3,1.5)");

    CHECK_THROWS_AS((void)log_step()->shift(-1.0), ParameterError);
}

TEST_CASE("shifted step weight has unit density on block interiors") {
    auto w = log_step()->shift(1.0);
    CHECK(w->density(2.9) == 1.0);
    CHECK(w->density(2.5) == 0.0);
    CHECK(w->exact_tail());
    CHECK(!rapidv(3.0)->shift(1.0)->exact_tail());
    CHECK(block_step()->shift(0.5)->exact_tail());

    // Breakpoints and witness levels pass through the shift.
    CHECK(w->breakpoints(0.0, 12.0) == log_step()->breakpoints(0.0, 12.0));
    CHECK(w->witness_levels() == log_step()->witness_levels());
}

TEST_CASE("frozen shifted-rapidv moment") {
    auto w = rapidv(3.0)->shift(1.0);
    CHECK(rel(w->moment(1.0), 0.075516447385151868) < 1e-11);
}

TEST_CASE("integration by parts ties tails to moments") {
    const std::vector<std::string> specs = {
        "lebesgue",      "standard:0.5",  "standard:2.5",
        "rapidv:3",      "t3",            "t7",
        "shift(t3,1)",   "shift(t7,0.5)", "shift(rapidv:3,1)"};
    for (const auto& spec : specs) {
        CAPTURE(spec);
        auto w = parse_weight(spec);
        for (double x : {0.5, 1.0, 3.0, 10.0}) {
            CAPTURE(x);
            RadialIntegralOptions opt;
            opt.g_tail_bound = std::exp(-80.0);
            const double lhs = radial_integral(
                [x](double l) { return rx_dr(x, l); }, *w,
                MeasureKind::TildeDr, opt);
            const double rhs = w->moment(x + 1.0);
            CHECK(rel((x + 1.0) * lhs, rhs) < 1e-10);
        }
    }
}

TEST_CASE("integration by parts for a weight with divergent tilde") {
    // rapidv:1.5 cannot certify a tilde-measure tail, so integrate the
    // level form directly instead of going through radial_integral.
    auto w = rapidv(1.5);
    for (double x : {0.5, 1.0, 3.0, 10.0}) {
        CAPTURE(x);
        QuadOptions q;
        q.rel_tol = 1e-12;
        auto f = [&](double l) { return rx_dr(x, l) * w->tail_hat(l); };
        const double lhs = integrate(f, 0.0, 80.0, q) +
                           integrate_lambda_tail(f, 80.0, q);
        CHECK(rel((x + 1.0) * lhs, w->moment(x + 1.0)) < 1e-10);
    }
}

TEST_CASE("Fubini: log-moment splits into moment plus tilde mass") {
    const std::vector<std::string> specs = {
        "lebesgue",      "standard:0.5",      "standard:2.5",
        "rapidv:3",      "rapidv:2.5",        "t3",
        "t7",            "shift(t3,1)",       "shift(t7,0.5)",
        "shift(rapidv:3,1)", "shift(rapidv:1.5,1.25)"};
    for (const auto& spec : specs) {
        CAPTURE(spec);
        auto w = parse_weight(spec);
        auto lm = w->log_moment();
        REQUIRE(lm.has_value());
        CHECK(rel(*lm, w->moment(0.0) + w->tilde_hat(0.0)) < 1e-10);
    }
}

TEST_CASE("Fubini cross-check against the frozen split for t3") {
    auto w = log_step();
    CHECK(rel(w->moment(0.0), 0.27241518045810436029) < 1e-12);
    CHECK(rel(w->tilde_hat(0.0), 1.292495389157285252) < 1e-12);
    CHECK(rel(*w->log_moment(),
              0.27241518045810436029 + 1.292495389157285252) < 1e-13);
}

TEST_CASE("tail_hat is monotone, strictly so where mass sits") {
    for (const auto& spec :
         {"lebesgue", "standard:0.5", "rapidv:3", "t3", "t7",
          "shift(t3,1)", "shift(t7,0.5)"}) {
        CAPTURE(spec);
        auto w = parse_weight(spec);
        const auto grid = log_levels(0.01, 30.0, 100);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            CHECK(w->tail_hat(grid[i]) >= w->tail_hat(grid[i + 1]));
    }
    for (const auto& spec : {"lebesgue", "standard:0.5", "rapidv:3"}) {
        CAPTURE(spec);
        auto w = parse_weight(spec);
        for (double l = 0.0; l < 30.0; l += 0.3)
            CHECK(w->tail_hat(l) > w->tail_hat(l + 0.3));
    }
    // Step weights: flat across gaps, strictly decreasing inside blocks.
    auto t3w = log_step();
    CHECK(t3w->tail_hat(2.1) == t3w->tail_hat(2.6));
    CHECK(t3w->tail_hat(2.9) > t3w->tail_hat(2.95));
    auto t7w = block_step();
    CHECK(t7w->tail_hat(6.5) == t7w->tail_hat(8.9));
    CHECK(t7w->tail_hat(4.2) > t7w->tail_hat(6.4));
}

TEST_CASE("closed tails agree with brute quadrature of the density") {
    for (const auto& spec : {"t3", "t7", "rapidv:3"}) {
        CAPTURE(spec);
        auto w = parse_weight(spec);
        const double hi = 35.0;
        const double cap = w->tail_hat(hi);
        for (double l : log_levels(0.01, 30.0, 100)) {
            CAPTURE(l);
            const double brute = brute_over(
                *w, [&](double u) { return w->dr_density_lambda(u); }, l, hi);
            const double want = w->tail_hat(l) - cap;
            CHECK(rel(brute, want) < 1e-9);
        }
    }
}

TEST_CASE("shifted step tails agree with brute quadrature") {
    struct Probe {
        const char* spec;
        double hi;
        std::vector<double> levels;
    };
    const std::vector<Probe> probes = {
        {"shift(t3,1)", 60.0, {0.0, 1.0, 2.5, 2.9, 5.995, 17.3}},
        {"shift(t3,0.25)", 120.0, {0.0, 2.9, 9.7}},
        {"shift(t7,0.5)", 100.0, {0.0, 3.0, 4.2, 5.0, 6.44, 10.0, 20.0}},
        {"shift(t7,0.01)", 200.0, {0.0, 4.2, 6.44}},
    };
    for (const auto& p : probes) {
        CAPTURE(p.spec);
        auto w = parse_weight(p.spec);
        for (double l : p.levels) {
            CAPTURE(l);
            auto drd = [&](double u) { return w->dr_density_lambda(u); };
            const double tail_brute = brute_over(*w, drd, l, p.hi);
            const double tail_want = w->tail_hat(l) - w->tail_hat(p.hi);
            CHECK(rel(tail_brute, tail_want) < 1e-9);

            auto tld = [&](double u) {
                return (u - l) * w->dr_density_lambda(u);
            };
            const double tilde_brute = brute_over(*w, tld, l, p.hi);
            const double tilde_want = w->tilde_hat(l) - w->tilde_hat(p.hi) -
                                      (p.hi - l) * w->tail_hat(p.hi);
            CHECK(rel(tilde_brute, tilde_want) < 1e-9);
        }
    }
}

TEST_CASE("slowly shifted t3 sums terminate and match quadrature") {
    auto w = log_step()->shift(0.01);
    auto drd = [&](double u) { return w->dr_density_lambda(u); };
    const double tail_brute = brute_over(*w, drd, 0.0, 2000.0);
    CHECK(rel(tail_brute, w->tail_hat(0.0) - w->tail_hat(2000.0)) < 1e-9);
    auto tld = [&](double u) { return u * w->dr_density_lambda(u); };
    const double tilde_brute = brute_over(*w, tld, 0.0, 2000.0);
    const double tilde_want = w->tilde_hat(0.0) - w->tilde_hat(2000.0) -
                              2000.0 * w->tail_hat(2000.0);
    CHECK(rel(tilde_brute, tilde_want) < 1e-9);
}

TEST_CASE("shifted log-moments agree with quadrature") {
    {
        auto w = log_step()->shift(1.0);
        auto f = [&](double u) {
            return (1.0 + u) * w->dr_density_lambda(u);
        };
        CHECK(rel(brute_over(*w, f, 0.0, 60.0), *w->log_moment()) < 1e-9);
    }
    {
        auto w = block_step()->shift(0.5);
        auto f = [&](double u) {
            return (1.0 + u) * w->dr_density_lambda(u);
        };
        CHECK(rel(brute_over(*w, f, 0.0, 100.0), *w->log_moment()) < 1e-9);
    }
}

TEST_CASE("shift coherence: shifted moments equal direct integrals") {
    struct Case {
        const char* base;
        double beta;
    };
    for (const auto& c : std::vector<Case>{{"t3", 1.0},
                                           {"t7", 0.5},
                                           {"rapidv:3", 1.0},
                                           {"standard:0.5", 2.0}}) {
        CAPTURE(c.base);
        auto base = parse_weight(c.base);
        auto shifted = base->shift(c.beta);
        for (double x : {0.5, 3.0}) {
            CAPTURE(x);
            RadialIntegralOptions opt;
            opt.g_tail_bound = std::exp(-80.0 * c.beta);
            const double direct = radial_integral(
                [x, &c](double l) {
                    const double rp =
                        x == 0.0 ? 0.0 : x * std::log1p(-std::exp(-l));
                    return std::exp(rp - c.beta * l);
                },
                *base, MeasureKind::OmegaDr, opt);
            CHECK(rel(shifted->moment(x), direct) < 1e-10);
        }
    }
}

TEST_CASE("radial_integral evaluates the three measures") {
    RadialIntegralOptions opt;
    opt.g_tail_bound = 1.0;
    auto one = [](double) { return 1.0; };

    CHECK(rel(radial_integral(one, *lebesgue(), MeasureKind::OmegaDr, opt),
              1.0) < 1e-12);
    CHECK(rel(radial_integral(one, *standard(1.0), MeasureKind::TildeDr, opt),
              0.25) < 1e-11);
    CHECK(rel(radial_integral(one, *lebesgue(), MeasureKind::OmegaRDr, opt),
              0.5) < 1e-11);
    auto w = standard(1.0);
    const double m3 = radial_integral(
        [](double l) { return std::exp(3.0 * std::log1p(-std::exp(-l))); },
        *w, MeasureKind::OmegaDr, opt);
    CHECK(rel(m3, w->moment(3.0)) < 1e-11);

    // The step weight's polynomial tail needs a far horizon before a unit
    // bound on g certifies; the missing mass past 2000 is ~5e-7 relative.
    RadialIntegralOptions far;
    far.g_tail_bound = 1.0;
    far.lambda_max = 2000.0;
    far.tail_rel_tol = 1e-5;
    const double s2 = radial_integral(one, *log_step(),
                                      MeasureKind::OmegaDr, far);
    CHECK(rel(s2, 0.27241518045810436029) < 1e-6);
}

TEST_CASE("radial_integral refuses uncertified tails") {
    auto one = [](double) { return 1.0; };
    {
        RadialIntegralOptions opt;  // g_tail_bound defaults to NaN
        CHECK_THROWS_AS(
            (void)radial_integral(one, *lebesgue(), MeasureKind::OmegaDr, opt),
            TailNotCertified);
    }
    {
        RadialIntegralOptions opt;
        opt.g_tail_bound = 1.0;
        CHECK_THROWS_AS((void)radial_integral(one, *rapidv(1.5),
                                              MeasureKind::TildeDr, opt),
                        TailNotCertified);
        // Slow polynomial tail: a unit bound on g is not enough.
        CHECK_THROWS_AS((void)radial_integral(one, *rapidv(1.5),
                                              MeasureKind::OmegaDr, opt),
                        TailNotCertified);
        // But an exponentially small g clears the same gate.
        RadialIntegralOptions tight;
        tight.g_tail_bound = std::exp(-80.0);
        const double ok = radial_integral(
            [](double l) { return std::exp(-l); }, *rapidv(1.5),
            MeasureKind::OmegaDr, tight);
        QuadOptions q;
        q.rel_tol = 1e-12;
        auto f = [](double l) {
            return std::exp(-l - 1.5 * std::log1p(l));
        };
        const double want =
            integrate(f, 0.0, 80.0, q) + integrate_lambda_tail(f, 80.0, q);
        CHECK(rel(ok, want) < 1e-9);
    }
    {
        RadialIntegralOptions opt;
        opt.g_tail_bound = -1.0;
        CHECK_THROWS_AS(
            (void)radial_integral(one, *lebesgue(), MeasureKind::OmegaDr, opt),
            ParameterError);
    }
    {
        RadialIntegralOptions opt;
        opt.g_tail_bound = 1.0;
        opt.lambda_max = 0.0;
        CHECK_THROWS_AS(
            (void)radial_integral(one, *lebesgue(), MeasureKind::OmegaDr, opt),
            ParameterError);
    }
}

TEST_CASE("measure densities in the level coordinate") {
    auto s1 = standard(1.0);
    CHECK(rel(measure_density_lambda(*s1, MeasureKind::TildeDr, std::log(2.0)),
              0.125) < 1e-14);
    auto leb = lebesgue();
    CHECK(rel(measure_density_lambda(*leb, MeasureKind::OmegaRDr,
                                     std::log(2.0)),
              0.25) < 1e-14);
    CHECK(measure_density_lambda(*leb, MeasureKind::OmegaDr, 0.0) == 1.0);
}

TEST_CASE("weight grammar round-trips") {
    for (const auto& spec :
         {"lebesgue", "standard:2.5", "standard:-0.5", "rapidv:3", "t3", "t7",
          "shift(rapidv:3,1)", "shift(t7,0.5)"}) {
        CAPTURE(spec);
        auto w = parse_weight(spec);
        CHECK(w->name() == spec);
        CHECK(parse_weight(w->name())->name() == w->name());
    }
    CHECK(parse_weight("t7:psi=log2")->name() == "t7");
    CHECK(parse_weight("shift(shift(t3,1),0.5)")->name() == "shift(t3,1.5)");
    CHECK(parse_weight("shift(standard:1,1)")->name() == "standard:2");
    CHECK(parse_weight("shift(lebesgue,2)")->name() == "standard:2");
    CHECK(parse_weight("shift(rapidv:3,0)")->family() == Family::RapidV);
    CHECK(parse_weight(" shift( t3 , 1 ) ")->name() == "shift(t3,1)");
    CHECK(parse_weight("  lebesgue ")->name() == "lebesgue");
}

TEST_CASE("weight grammar rejects malformed specs") {
    for (const auto& spec :
         {"bogus", "standard:", "standard:abc", "rapidv:0.5", "standard:-1",
          "rapidv:1", "shift(t3,-1)", "t7:psi=weird", "lebesgue:1", "t3:2",
          "shift(t3)", "shift(t3,1", "shift(,1)", "", "standard:1e999",
          "standard:nan", "shift(t3,1))"}) {
        CAPTURE(spec);
        CHECK_THROWS_AS((void)parse_weight(spec), ParameterError);
    }
}

TEST_CASE("parameter validation on the weight interface") {
    CHECK_THROWS_AS((void)standard(-1.0), ParameterError);
    CHECK_THROWS_AS((void)rapidv(1.0), ParameterError);
    CHECK_THROWS_AS((void)lebesgue()->moment(-0.5), ParameterError);
    CHECK_THROWS_AS((void)rapidv(3.0)->moment(-2.0), ParameterError);
    CHECK_THROWS_AS((void)lebesgue()->tail_hat(-0.1), ParameterError);
    CHECK_THROWS_AS((void)standard(0.5)->density(-1.0), ParameterError);
}

TEST_CASE("family and measure names") {
    CHECK(std::string(to_string(Family::Lebesgue)) == "lebesgue");
    CHECK(std::string(to_string(Family::Shifted)) == "shifted");
    CHECK(std::string(to_string(MeasureKind::OmegaDr)) == "omega-dr");
    CHECK(std::string(to_string(MeasureKind::TildeDr)) == "tilde-dr");
    CHECK(std::string(to_string(MeasureKind::OmegaRDr)) == "omega-r-dr");
}
