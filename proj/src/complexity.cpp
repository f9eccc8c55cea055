#include "linked/complexity.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace linked {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_delta(double delta, const char* who) {
    if (!(delta > 0.0 && delta < 1.0)) {
        std::ostringstream msg;
        msg << who << ": delta must lie in (0, 1), got " << delta;
        throw std::invalid_argument(msg.str());
    }
}

// ln(max(2, (1/delta) ln(1/gap))): the log-log factor of the elimination
// bounds, kept positive for gaps above 1/2.
double log_log_term(double gap, double delta) {
    const double inner = std::log(1.0 / gap) / delta;
    return std::log(std::max(2.0, inner));
}

}  // namespace

GapProfile gap_profile(const std::vector<double>& means) {
    if (means.empty()) {
        throw std::invalid_argument("gap_profile: at least one arm is required");
    }
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (!(means[i] >= 0.0 && means[i] <= 1.0)) {
            std::ostringstream msg;
            msg << "gap_profile: mean of arm " << (i + 1) << " lies outside [0, 1]";
            throw std::invalid_argument(msg.str());
        }
    }

    std::size_t best = 0;
    int best_count = 1;
    for (std::size_t i = 1; i < means.size(); ++i) {
        if (means[i] > means[best]) {
            best = i;
            best_count = 1;
        } else if (means[i] == means[best]) {
            ++best_count;
        }
    }
    if (best_count != 1) {
        throw std::invalid_argument("gap_profile: no unique best arm");
    }

    GapProfile out;
    out.best_index = static_cast<int>(best) + 1;
    out.best_mean = means[best];
    out.gaps.resize(means.size());
    out.min_gap = kInf;
    for (std::size_t i = 0; i < means.size(); ++i) {
        out.gaps[i] = out.best_mean - means[i];
        if (i != best) out.min_gap = std::min(out.min_gap, out.gaps[i]);
    }
    out.survival_prefix = 1.0;
    for (std::size_t i = 0; i + 1 < means.size(); ++i) {
        out.survival_prefix *= 1.0 - means[i];
    }
    out.survival_all = out.survival_prefix * (1.0 - means.back());
    return out;
}

double bound_maximal(const GapProfile& profile, double delta) {
    validate_delta(delta, "bound_maximal");
    const int n = profile.num_arms();
    if (n == 1) return 0.0;
    const double p = profile.survival_prefix;
    if (p <= 0.0) return kInf;
    const double gap = profile.min_gap;
    return (1.0 / (gap * gap * p * p)) * std::log(n / (gap * p * delta));
}

double bound_uniform(const GapProfile& profile, double delta) {
    validate_delta(delta, "bound_uniform");
    const int n = profile.num_arms();
    if (n == 1) return 0.0;
    double mean_sum = 0.0;
    for (int arm = 1; arm < n; ++arm) mean_sum += profile.mean(arm);
    const double gap_sq = profile.min_gap * profile.min_gap;
    return ((1.0 + mean_sum) / gap_sq + std::sqrt((n - 1) / gap_sq)) *
           std::log(n / delta);
}

double bound_ege(const GapProfile& profile, double delta) {
    validate_delta(delta, "bound_ege");
    const int n = profile.num_arms();
    if (n == 1) return 0.0;

    const double gap = profile.min_gap;
    double total = (1.0 / (gap * gap)) * log_log_term(gap, delta);
    double sqrt_sum = 0.0;
    for (int arm = 1; arm <= n; ++arm) {
        if (arm == profile.best_index) continue;
        const double g = profile.gaps[static_cast<std::size_t>(arm) - 1];
        const double term = log_log_term(g, delta) / (g * g);
        total += profile.mean(arm) * term;
        sqrt_sum += term;
    }
    total += std::sqrt(sqrt_sum) * std::log(1.0 / delta);
    return total;
}

double bound_lower(const GapProfile& profile, double delta) {
    validate_delta(delta, "bound_lower");
    const int n = profile.num_arms();
    if (n == 1) return 0.0;

    double sum = 0.0;
    for (int arm = 1; arm <= n; ++arm) {
        if (arm == profile.best_index) continue;
        const double g = profile.gaps[static_cast<std::size_t>(arm) - 1];
        sum += profile.mean(arm) / (g * g);
    }
    sum += (profile.best_mean + profile.survival_all) / (profile.min_gap * profile.min_gap);
    return sum * std::log(1.0 / delta);
}

BoundReport evaluate_bounds(const std::vector<double>& means, double delta) {
    const GapProfile profile = gap_profile(means);
    BoundReport report;
    report.delta = delta;
    report.maximal = bound_maximal(profile, delta);
    report.uniform = bound_uniform(profile, delta);
    report.ege = bound_ege(profile, delta);
    report.lower = bound_lower(profile, delta);
    return report;
}

}  // namespace linked
