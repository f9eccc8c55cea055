#pragma once

#include <vector>

namespace linked {

// Gap and survival profile of a mean vector with a unique best arm.
struct GapProfile {
    int best_index = 0;   // 1-based
    double best_mean = 0.0;
    std::vector<double> gaps;  // best_mean - mu_i; zero exactly at best_index
    double min_gap = 0.0;      // +infinity when there is a single arm
    double survival_prefix = 1.0;  // prod over the first n-1 arms of (1 - mu_i)
    double survival_all = 1.0;     // prod over all n arms of (1 - mu_i)

    int num_arms() const { return static_cast<int>(gaps.size()); }
    double mean(int arm) const {
        return best_mean - gaps[static_cast<std::size_t>(arm) - 1];
    }
};

// Rejects mean vectors whose maximum is not attained at a unique index.
GapProfile gap_profile(const std::vector<double>& means);

// Closed-form play-complexity evaluators. Every hidden constant is taken as
// 1, logarithms are natural, and the arguments of outer log-log terms are
// clamped below at 2 so each term stays positive. These are trend overlays,
// not certified budgets.
double bound_maximal(const GapProfile& profile, double delta);
double bound_uniform(const GapProfile& profile, double delta);
double bound_ege(const GapProfile& profile, double delta);
double bound_lower(const GapProfile& profile, double delta);

struct BoundReport {
    double delta = 0.0;
    double maximal = 0.0;
    double uniform = 0.0;
    double ege = 0.0;
    double lower = 0.0;

    static constexpr const char* kConvention =
        "constants taken as 1, natural logarithms, log-log arguments clamped below at 2";
};

BoundReport evaluate_bounds(const std::vector<double>& means, double delta);

}  // namespace linked
