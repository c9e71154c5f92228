#include "bwl/weight.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "bwl/accum.hpp"
#include "bwl/errors.hpp"
#include "bwl/format.hpp"
#include "bwl/theorem3.hpp"
#include "bwl/theorem7.hpp"

namespace bwl {
namespace {

void check_level(double lambda, const char* who) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ParameterError(std::string(who) +
                             ": level must be finite and >= 0");
}

void check_x(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw ParameterError("moment: x must be finite and >= 0");
}

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ParameterError("shift: beta must be finite and >= 0");
}

double log_beta_fn(double p, double q) {
    return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

// ------------------------------------------------------------- lebesgue

class LebesgueW final : public Weight {
  public:
    Family family() const override { return Family::Lebesgue; }
    std::string name() const override { return "lebesgue"; }
    bool exact_tail() const override { return true; }
    double density(double l) const override {
        check_level(l, "density");
        return 1.0;
    }
    double dr_density_lambda(double l) const override {
        check_level(l, "dr_density_lambda");
        return std::exp(-l);
    }
    double tail_hat(double l) const override {
        check_level(l, "tail_hat");
        return std::exp(-l);
    }
    bool tilde_integrable() const override { return true; }
    double tilde_hat(double l) const override {
        check_level(l, "tilde_hat");
        return std::exp(-l);  // omega-tilde is identically 1
    }
    double moment(double x) const override {
        check_x(x);
        return 1.0 / (x + 1.0);
    }
    double moment_log_scaled(double x, double beta,
                             double ls) const override {
        check_x(x);
        check_beta(beta);
        return std::exp(ls + log_beta_fn(x + 1.0, beta + 1.0));
    }
    std::optional<double> log_moment() const override { return 2.0; }
    std::vector<double> breakpoints(double, double) const override {
        return {};
    }
    std::vector<double> witness_levels() const override { return {}; }
    WeightPtr shift(double beta) const override;
};

// ------------------------------------------------------------- standard

class StandardW final : public Weight {
    double alpha_;

  public:
    explicit StandardW(double a) : alpha_(a) {
        if (!(a > -1.0) || !std::isfinite(a))
            throw ParameterError("standard: alpha must be > -1");
    }
    Family family() const override { return Family::Standard; }
    std::string name() const override {
        return "standard:" + format_shortest(alpha_);
    }
    bool exact_tail() const override { return true; }
    double density(double l) const override {
        check_level(l, "density");
        return std::exp(-alpha_ * l);
    }
    double dr_density_lambda(double l) const override {
        check_level(l, "dr_density_lambda");
        return std::exp(-(alpha_ + 1.0) * l);
    }
    double tail_hat(double l) const override {
        check_level(l, "tail_hat");
        return std::exp(-(alpha_ + 1.0) * l) / (alpha_ + 1.0);
    }
    bool tilde_integrable() const override { return true; }
    double tilde_hat(double l) const override {
        check_level(l, "tilde_hat");
        const double a1 = alpha_ + 1.0;
        return std::exp(-a1 * l) / (a1 * a1);
    }
    double moment(double x) const override {
        check_x(x);
        return std::exp(log_beta_fn(x + 1.0, alpha_ + 1.0));
    }
    double moment_log_scaled(double x, double beta,
                             double ls) const override {
        check_x(x);
        check_beta(beta);
        return std::exp(ls + log_beta_fn(x + 1.0, alpha_ + beta + 1.0));
    }
    std::optional<double> log_moment() const override {
        const double a1 = alpha_ + 1.0;
        return 1.0 / a1 + 1.0 / (a1 * a1);
    }
    std::vector<double> breakpoints(double, double) const override {
        return {};
    }
    std::vector<double> witness_levels() const override { return {}; }
    WeightPtr shift(double beta) const override {
        check_beta(beta);
        return std::make_shared<StandardW>(alpha_ + beta);
    }
};

// -------------------------------------------------------------- rapidv

class RapidVW final : public Weight {
    double alpha_;

  public:
    explicit RapidVW(double a) : alpha_(a) {
        if (!(a > 1.0) || !std::isfinite(a))
            throw ParameterError("rapidv: alpha must be > 1");
    }
    Family family() const override { return Family::RapidV; }
    std::string name() const override {
        return "rapidv:" + format_shortest(alpha_);
    }
    bool exact_tail() const override { return true; }
    double density(double l) const override {
        check_level(l, "density");
        return std::exp(l - alpha_ * std::log1p(l));
    }
    double dr_density_lambda(double l) const override {
        check_level(l, "dr_density_lambda");
        return std::exp(-alpha_ * std::log1p(l));
    }
    double tail_hat(double l) const override {
        check_level(l, "tail_hat");
        return std::exp((1.0 - alpha_) * std::log1p(l)) / (alpha_ - 1.0);
    }
    bool tilde_integrable() const override { return alpha_ > 2.0; }
    double tilde_hat(double l) const override {
        check_level(l, "tilde_hat");
        if (alpha_ <= 2.0)
            throw DivergentWeight(
                "tilde_hat: omega-tilde of rapidv with alpha <= 2 is not "
                "integrable");
        return std::exp((2.0 - alpha_) * std::log1p(l)) /
               ((alpha_ - 1.0) * (alpha_ - 2.0));
    }
    double moment(double x) const override {
        return moment_log_scaled(x, 0.0, 0.0);
    }
    double moment_log_scaled(double x, double beta,
                             double ls) const override {
        check_x(x);
        check_beta(beta);
        const double m = x > 1.0 ? std::log(x) : 0.0;
        const double cap = std::max(80.0, m + 40.0);
        const double lo = std::max(0.0, m - 30.0);
        const double a = alpha_;
        auto f = [x, beta, ls, a](double l) {
            const double rp =
                x == 0.0 ? 0.0 : x * std::log1p(-std::exp(-l));
            return std::exp(rp + ls - beta * l - a * std::log1p(l));
        };
        QuadOptions opt;
        opt.rel_tol = 1e-12;
        Accum acc;
        acc.add(integrate(f, lo, cap, opt));
        if (beta == 0.0) {
            // Past cap, r^x = 1 - O(e^-40); the rest is the closed
            // polynomial tail of (1+l)^-alpha.
            acc.add(std::exp(ls + (1.0 - a) * std::log1p(cap)) / (a - 1.0));
        } else {
            acc.add(integrate_lambda_tail(f, cap, opt));
        }
        return acc.total();
    }
    std::optional<double> log_moment() const override {
        if (alpha_ <= 2.0) return std::nullopt;
        return 1.0 / (alpha_ - 2.0);
    }
    std::vector<double> breakpoints(double, double) const override {
        return {};
    }
    std::vector<double> witness_levels() const override { return {}; }
    WeightPtr shift(double beta) const override;
};

// ------------------------------------------------------------- log_step

class LogStepW final : public Weight {
  public:
    Family family() const override { return Family::LogStep; }
    std::string name() const override { return "t3"; }
    bool exact_tail() const override { return true; }
    double density(double l) const override {
        check_level(l, "density");
        return t3::density(l);
    }
    double dr_density_lambda(double l) const override {
        return t3::dr_density_lambda(l);
    }
    double tail_hat(double l) const override { return t3::tail_hat(l); }
    bool tilde_integrable() const override { return true; }
    double tilde_hat(double l) const override { return t3::tilde_tail(l); }
    double moment(double x) const override { return t3::moment(x); }
    double moment_log_scaled(double x, double beta,
                             double ls) const override {
        return t3::moment_log_scaled(x, beta, ls);
    }
    std::optional<double> log_moment() const override {
        return t3::log_moment();
    }
    std::vector<double> breakpoints(double lo, double hi) const override {
        return t3::breakpoints(lo, hi);
    }
    std::vector<double> witness_levels() const override {
        return t3::witness_levels();
    }
    WeightPtr shift(double beta) const override;
};

// ------------------------------------------------------------ block_step

class BlockStepW final : public Weight {
  public:
    static const t7::Geometry& geo() { return t7::builtin(); }
    Family family() const override { return Family::BlockStep; }
    std::string name() const override { return "t7"; }
    bool exact_tail() const override { return true; }
    double density(double l) const override { return geo().density(l); }
    double dr_density_lambda(double l) const override {
        return geo().dr_density_lambda(l);
    }
    double tail_hat(double l) const override { return geo().tail_hat(l); }
    bool tilde_integrable() const override { return true; }
    double tilde_hat(double l) const override { return geo().tilde_tail(l); }
    double moment(double x) const override { return geo().moment(x); }
    double moment_log_scaled(double x, double beta,
                             double ls) const override {
        return geo().moment_log_scaled(x, beta, ls);
    }
    std::optional<double> log_moment() const override {
        return geo().log_moment();
    }
    std::vector<double> breakpoints(double lo, double hi) const override {
        return geo().breakpoints(lo, hi);
    }
    std::vector<double> witness_levels() const override {
        return geo().witness_levels();
    }
    WeightPtr shift(double beta) const override;
};

// -------------------------------------------------------------- shifted

class ShiftedW final : public Weight {
    WeightPtr base_;  // RapidV, LogStep, or BlockStep (others merge)
    double beta_;

  public:
    ShiftedW(WeightPtr base, double beta)
        : base_(std::move(base)), beta_(beta) {}
    Family family() const override { return Family::Shifted; }
    std::string name() const override {
        return "shift(" + base_->name() + "," + format_shortest(beta_) + ")";
    }
    bool exact_tail() const override {
        return base_->family() != Family::RapidV;
    }
    double density(double l) const override {
        check_level(l, "density");
        if (base_->family() == Family::LogStep)
            return t3::dr_density_lambda(l) == 0.0
                       ? 0.0
                       : std::exp((1.0 - beta_) * l);
        const double d = base_->density(l);
        return d == 0.0 ? 0.0 : d * std::exp(-beta_ * l);
    }
    double dr_density_lambda(double l) const override {
        const double d = base_->dr_density_lambda(l);
        return d == 0.0 ? 0.0 : d * std::exp(-beta_ * l);
    }
    double tail_hat(double l) const override {
        switch (base_->family()) {
            case Family::LogStep:
                return t3::shifted_tail(l, beta_);
            case Family::BlockStep:
                return BlockStepW::geo().shifted_tail(l, beta_);
            default: {
                check_level(l, "tail_hat");
                QuadOptions opt;
                opt.rel_tol = 1e-11;
                auto f = [this](double u) { return dr_density_lambda(u); };
                return integrate_lambda_tail(f, l, opt);
            }
        }
    }
    bool tilde_integrable() const override { return true; }
    double tilde_hat(double l) const override {
        switch (base_->family()) {
            case Family::LogStep:
                return t3::shifted_tilde(l, beta_);
            case Family::BlockStep:
                return BlockStepW::geo().shifted_tilde(l, beta_);
            default: {
                check_level(l, "tilde_hat");
                QuadOptions opt;
                opt.rel_tol = 1e-11;
                auto f = [this, l](double u) {
                    return (u - l) * dr_density_lambda(u);
                };
                return integrate_lambda_tail(f, l, opt);
            }
        }
    }
    double moment(double x) const override {
        return base_->moment_log_scaled(x, beta_, 0.0);
    }
    double moment_log_scaled(double x, double beta,
                             double ls) const override {
        check_beta(beta);
        return base_->moment_log_scaled(x, beta_ + beta, ls);
    }
    std::optional<double> log_moment() const override {
        switch (base_->family()) {
            case Family::LogStep:
                return t3::shifted_log_moment(beta_);
            case Family::BlockStep:
                return BlockStepW::geo().shifted_log_moment(beta_);
            default: {
                QuadOptions opt;
                opt.rel_tol = 1e-11;
                auto f = [this](double u) {
                    return (1.0 + u) * dr_density_lambda(u);
                };
                return integrate_lambda_tail(f, 0.0, opt);
            }
        }
    }
    std::vector<double> breakpoints(double lo, double hi) const override {
        return base_->breakpoints(lo, hi);
    }
    std::vector<double> witness_levels() const override {
        return base_->witness_levels();
    }
    WeightPtr shift(double beta) const override {
        check_beta(beta);
        return base_->shift(beta_ + beta);
    }
};

WeightPtr LebesgueW::shift(double beta) const {
    check_beta(beta);
    if (beta == 0.0) return lebesgue();
    return standard(beta);
}

WeightPtr RapidVW::shift(double beta) const {
    check_beta(beta);
    if (beta == 0.0) return rapidv(alpha_);
    return std::make_shared<ShiftedW>(rapidv(alpha_), beta);
}

WeightPtr LogStepW::shift(double beta) const {
    check_beta(beta);
    if (beta == 0.0) return log_step();
    return std::make_shared<ShiftedW>(log_step(), beta);
}

WeightPtr BlockStepW::shift(double beta) const {
    check_beta(beta);
    if (beta == 0.0) return block_step();
    return std::make_shared<ShiftedW>(block_step(), beta);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& s, const char* what) {
    const std::string t = trim(s);
    const std::string bad =
        std::string("parse_weight: bad ") + what + " '" + t + "'";
    if (t.empty())
        throw ParameterError(std::string("parse_weight: missing ") + what);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size() || !std::isfinite(v))
            throw ParameterError(bad);
        return v;
    } catch (const ParameterError&) {
        throw;
    } catch (const std::exception&) {
        throw ParameterError(bad);
    }
}

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::Lebesgue: return "lebesgue";
        case Family::Standard: return "standard";
        case Family::RapidV: return "rapidv";
        case Family::LogStep: return "logstep";
        case Family::BlockStep: return "blockstep";
        case Family::Shifted: return "shifted";
    }
    return "?";
}

const char* to_string(MeasureKind m) {
    switch (m) {
        case MeasureKind::OmegaDr: return "omega-dr";
        case MeasureKind::TildeDr: return "tilde-dr";
        case MeasureKind::OmegaRDr: return "omega-r-dr";
    }
    return "?";
}

WeightPtr lebesgue() { return std::make_shared<LebesgueW>(); }
WeightPtr standard(double alpha) {
    return std::make_shared<StandardW>(alpha);
}
WeightPtr rapidv(double alpha) { return std::make_shared<RapidVW>(alpha); }
WeightPtr log_step() { return std::make_shared<LogStepW>(); }
WeightPtr block_step() { return std::make_shared<BlockStepW>(); }

WeightPtr parse_weight(const std::string& spec) {
    const std::string s = trim(spec);
    if (s.rfind("shift(", 0) == 0) {
        if (s.back() != ')')
            throw ParameterError("parse_weight: expected ')' at the end of '" +
                                 s + "'");
        const std::string inner = s.substr(6, s.size() - 7);
        int depth = 0;
        std::size_t cut = std::string::npos;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') {
                ++depth;
            } else if (inner[i] == ')') {
                if (--depth < 0)
                    throw ParameterError(
                        "parse_weight: unbalanced parentheses in '" + s + "'");
            } else if (inner[i] == ',' && depth == 0) {
                cut = i;
            }
        }
        if (depth != 0)
            throw ParameterError("parse_weight: unbalanced parentheses in '" +
                                 s + "'");
        if (cut == std::string::npos)
            throw ParameterError(
                "parse_weight: shift needs a base weight and a beta");
        WeightPtr base = parse_weight(inner.substr(0, cut));
        const double beta = parse_number(inner.substr(cut + 1), "shift amount");
        if (beta < 0.0)
            throw ParameterError("parse_weight: shift amount must be >= 0");
        return base->shift(beta);
    }
    const std::size_t colon = s.find(':');
    const bool has_arg = colon != std::string::npos;
    const std::string head = trim(has_arg ? s.substr(0, colon) : s);
    const std::string arg = has_arg ? s.substr(colon + 1) : std::string();
    if (head == "lebesgue") {
        if (has_arg)
            throw ParameterError("parse_weight: lebesgue takes no parameter");
        return lebesgue();
    }
    if (head == "standard") {
        if (!has_arg)
            throw ParameterError("parse_weight: standard needs ':<alpha>'");
        return standard(parse_number(arg, "alpha"));
    }
    if (head == "rapidv") {
        if (!has_arg)
            throw ParameterError("parse_weight: rapidv needs ':<alpha>'");
        return rapidv(parse_number(arg, "alpha"));
    }
    if (head == "t3") {
        if (has_arg)
            throw ParameterError("parse_weight: t3 takes no parameter");
        return log_step();
    }
    if (head == "t7") {
        if (has_arg && trim(arg) != "psi=log2")
            throw ParameterError(
                "parse_weight: only t7:psi=log2 is built in");
        return block_step();
    }
    throw ParameterError("parse_weight: unknown weight '" + s + "'");
}

double measure_density_lambda(const Weight& w, MeasureKind m, double lambda) {
    switch (m) {
        case MeasureKind::OmegaDr:
            return w.dr_density_lambda(lambda);
        case MeasureKind::TildeDr:
            return w.tail_hat(lambda);
        case MeasureKind::OmegaRDr:
            return w.dr_density_lambda(lambda) * (-std::expm1(-lambda));
    }
    throw ParameterError("measure_density_lambda: unknown measure kind");
}

double radial_integral(const std::function<double(double)>& g_level,
                       const Weight& w, MeasureKind m,
                       const RadialIntegralOptions& opt) {
    if (!(opt.lambda_max > 0.0) || !std::isfinite(opt.lambda_max))
        throw ParameterError(
            "radial_integral: lambda_max must be positive and finite");
    if (!g_level)
        throw ParameterError("radial_integral: g must be evaluable");
    double mass;
    if (m == MeasureKind::TildeDr) {
        if (!w.tilde_integrable())
            throw TailNotCertified(
                "radial_integral: the tilde measure of " + w.name() +
                " has infinite mass; the tail cannot be certified");
        mass = w.tilde_hat(opt.lambda_max);
    } else {
        mass = w.tail_hat(opt.lambda_max);
    }
    if (std::isnan(opt.g_tail_bound))
        throw TailNotCertified(
            "radial_integral: no bound on g beyond lambda_max was provided");
    if (!(opt.g_tail_bound >= 0.0))
        throw ParameterError("radial_integral: g_tail_bound must be >= 0");
    std::vector<double> cells = w.breakpoints(0.0, opt.lambda_max);
    cells.push_back(0.0);
    cells.push_back(opt.lambda_max);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    auto f = [&](double l) {
        return g_level(l) * measure_density_lambda(w, m, l);
    };
    const double partial = integrate_cells(f, cells, opt.quad);
    if (opt.g_tail_bound * mass > opt.tail_rel_tol * std::fabs(partial))
        throw TailNotCertified(
            "radial_integral: tail beyond lambda_max exceeds tolerance; "
            "raise lambda_max or tighten g_tail_bound");
    return partial;
}

}  // namespace bwl
