#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "bwl/errors.hpp"

namespace bwl {

enum class ProfileKind {
    DhatRatio,        // omega-hat(l) / omega-hat(l + ln K)
    DcheckRatio,      // same raw ratio, judged from below
    MomentCondition,  // x^beta (w_[beta])_x / w_x
    TailComparison,   // omega-hat / tilde-hat
    Regularity,       // density * (1-r) / omega-hat
};

enum class TailTrend { Increasing, Decreasing, Stable };

struct ProfileSummary {
    double sup = 0.0;
    double inf = 0.0;
    TailTrend tail_trend = TailTrend::Stable;
};

// One diagnostic curve: values over an ascending parameter grid (levels, or
// moment indices x for MomentCondition), a kind tag, and the kind parameter
// (K or beta; 0 when the kind has none).
struct RatioProfile {
    std::vector<double> grid;
    std::vector<double> values;
    ProfileKind kind = ProfileKind::DhatRatio;
    double param = 0.0;
    ProfileSummary summary;
};

// Deterministic trend rule: compare the mean over the last quarter of the
// grid against the quarter before it; 5% movement either way is a trend.
inline ProfileSummary summarize(const std::vector<double>& values) {
    if (values.empty()) throw ParameterError("summarize: empty profile");
    ProfileSummary s;
    s.sup = *std::max_element(values.begin(), values.end());
    s.inf = *std::min_element(values.begin(), values.end());
    const std::size_t n = values.size();
    const std::size_t q = std::max<std::size_t>(1, n / 4);
    auto mean = [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m += values[i];
        return m / double(hi - lo);
    };
    if (n >= 4) {
        const double recent = mean(n - q, n);
        const double before = mean(n - 2 * q, n - q);
        if (before != 0.0) {
            const double change = recent / before - 1.0;
            if (change > 0.05)
                s.tail_trend = TailTrend::Increasing;
            else if (change < -0.05)
                s.tail_trend = TailTrend::Decreasing;
        }
    }
    return s;
}

enum class Verdict { EvidenceIn, EvidenceOut, Inconclusive };

struct WitnessPoint {
    double parameter;  // scale parameter (level, x, or index)
    double ratio;
};

// Evidence, never proof: membership in the weight classes is asymptotic,
// and these verdicts only report desk-scale behavior under fixed rules.
struct ClassVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<WitnessPoint> witness;
    std::string note;
};

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::EvidenceIn: return "EvidenceIn";
        case Verdict::EvidenceOut: return "EvidenceOut";
        default: return "Inconclusive";
    }
}

inline const char* to_string(TailTrend t) {
    switch (t) {
        case TailTrend::Increasing: return "increasing";
        case TailTrend::Decreasing: return "decreasing";
        default: return "stable";
    }
}

inline const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::DhatRatio: return "dhat";
        case ProfileKind::DcheckRatio: return "dcheck";
        case ProfileKind::MomentCondition: return "moment-condition";
        case ProfileKind::TailComparison: return "tail-comparison";
        default: return "regularity";
    }
}

}  // namespace bwl
