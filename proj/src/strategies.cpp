#include "linked/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace linked {

namespace {

void validate_subset(const std::vector<int>& arms, int num_arms, const char* who) {
    if (arms.empty()) {
        throw std::invalid_argument(std::string(who) + ": empty arm subset");
    }
    int prev = 0;
    for (int arm : arms) {
        if (arm < 1 || arm > num_arms || arm <= prev) {
            std::ostringstream msg;
            msg << who << ": arm subset must be strictly increasing within [1, "
                << num_arms << "]";
            throw std::invalid_argument(msg.str());
        }
        prev = arm;
    }
}

void validate_delta(double delta, const char* who) {
    if (!(delta > 0.0 && delta < 1.0)) {
        std::ostringstream msg;
        msg << who << ": delta must lie in (0, 1), got " << delta;
        throw std::invalid_argument(msg.str());
    }
}

// Rounds a real sample count up, guarding the uint64 conversion.
std::uint64_t ceil_count(double x) {
    if (!(x > 0.0)) return 1;
    const double c = std::ceil(x);
    if (c >= 9.0e18) {
        throw std::overflow_error("sample count does not fit in 64 bits");
    }
    return static_cast<std::uint64_t>(c);
}

// Lowest index on ties.
std::size_t argmax_position(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

// Check thresholds ceil(1.5^k): due once the play count first exceeds the
// pending threshold, then skip every threshold at or below that count.
class StopCheckSchedule {
public:
    bool due(std::uint64_t plays) {
        if (plays <= next_) return false;
        while (next_ < plays) {
            next_ = threshold(++k_);
        }
        return true;
    }

private:
    static std::uint64_t threshold(int k) {
        const double t = std::ceil(std::pow(1.5, k));
        if (t >= 9.0e18) return std::numeric_limits<std::uint64_t>::max();
        return static_cast<std::uint64_t>(t);
    }

    int k_ = 0;
    std::uint64_t next_ = 1;
};

PlayCapReached with_low_sample_diagnostic(const Environment& env,
                                          const PlayCapReached& cause) {
    std::ostringstream msg;
    msg << cause.what() << "; arms with fewer than 2 samples:";
    bool any = false;
    for (int arm = 1; arm <= env.num_arms(); ++arm) {
        if (env.stats().sample_count[static_cast<std::size_t>(arm) - 1] < 2) {
            msg << ' ' << arm;
            any = true;
        }
    }
    if (!any) msg << " none";
    return PlayCapReached(cause.plays(), msg.str());
}

}  // namespace

SuffixSampleResult suffix_sample(Environment& env, const std::vector<int>& arms,
                                 std::uint64_t t) {
    validate_subset(arms, env.num_arms(), "suffix_sample");
    if (t == 0) {
        throw std::invalid_argument("suffix_sample: per-arm sample count must be >= 1");
    }

    const std::size_t m = arms.size();
    SuffixSampleResult res;
    res.arms = arms;
    res.fresh_samples.assign(m, 0);
    res.fresh_successes.assign(m, 0);

    std::vector<std::size_t> position(static_cast<std::size_t>(env.num_arms()) + 1, 0);
    for (std::size_t j = 0; j < m; ++j) {
        position[static_cast<std::size_t>(arms[j])] = j;
    }

    PlayRequest request;
    PlayFeedback fb;
    for (std::size_t lead = 0; lead < m; ++lead) {
        request.indices.assign(arms.begin() + static_cast<std::ptrdiff_t>(lead),
                               arms.end());
        // Every play of this suffix samples the lead arm exactly once.
        while (res.fresh_samples[lead] < t) {
            env.play_prevalidated(request, fb);
            res.plays_used += 1;
            for (std::size_t k = 0; k < fb.sampled.size(); ++k) {
                const std::size_t j = position[static_cast<std::size_t>(fb.sampled[k])];
                res.fresh_samples[j] += 1;
                res.fresh_successes[j] += fb.rewards[k];
            }
        }
    }

    res.fresh_means.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        res.fresh_means[j] =
            static_cast<double>(res.fresh_successes[j]) / static_cast<double>(t);
    }
    return res;
}

StrategyOutcome maximal_sampling_fixed(Environment& env, std::uint64_t num_plays) {
    if (num_plays == 0) {
        throw std::invalid_argument("maximal_sampling_fixed: need at least one play");
    }
    const PlayRequest request = PlayRequest::full(env.num_arms());
    PlayFeedback fb;
    for (std::uint64_t i = 0; i < num_plays; ++i) {
        env.play_prevalidated(request, fb);
    }

    StrategyOutcome out;
    out.identified_arm = argmax_defined(empirical_means(env.stats()));
    out.total_plays = num_plays;
    out.line5_plays = num_plays;
    out.per_arm_samples = env.stats().sample_count;
    out.under_sampled =
        std::any_of(out.per_arm_samples.begin(), out.per_arm_samples.end(),
                    [](std::uint64_t c) { return c == 0; });
    return out;
}

StrategyOutcome uniform_sampling_fixed(Environment& env, std::uint64_t t) {
    std::vector<int> arms(static_cast<std::size_t>(env.num_arms()));
    std::iota(arms.begin(), arms.end(), 1);
    const SuffixSampleResult res = suffix_sample(env, arms, t);

    StrategyOutcome out;
    out.identified_arm = arms[argmax_position(res.fresh_means)];
    out.total_plays = res.plays_used;
    out.line5_plays = res.plays_used;
    out.per_arm_samples = res.fresh_samples;
    return out;
}

int median_elimination(Environment& env, std::vector<int> arms, double epsilon,
                       double delta) {
    validate_subset(arms, env.num_arms(), "median_elimination");
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("median_elimination: epsilon must be positive");
    }
    validate_delta(delta, "median_elimination");

    double eps_l = epsilon / 4.0;
    double delta_l = delta / 2.0;
    while (arms.size() > 1) {
        const std::uint64_t t_l =
            ceil_count((4.0 / (eps_l * eps_l)) * std::log(3.0 / delta_l));
        const SuffixSampleResult res = suffix_sample(env, arms, t_l);

        // Median = the ceil(k/2)-th largest estimate; arms at the median stay.
        std::vector<double> order = res.fresh_means;
        const std::size_t rank = (arms.size() + 1) / 2;
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                         order.end(), std::greater<>());
        const double median = order[rank - 1];

        std::vector<int> next;
        next.reserve(arms.size());
        for (std::size_t j = 0; j < arms.size(); ++j) {
            if (res.fresh_means[j] >= median) next.push_back(arms[j]);
        }
        arms = std::move(next);
        eps_l *= 0.75;
        delta_l *= 0.5;
    }
    return arms.front();
}

EgeRound ege_round(int round, double delta) {
    if (round < 1) {
        throw std::invalid_argument("ege_round: rounds are numbered from 1");
    }
    validate_delta(delta, "ege_round");
    EgeRound out;
    out.round = round;
    out.epsilon = std::ldexp(0.25, -round);  // 2^-r / 4, exact
    out.delta = delta / (50.0 * static_cast<double>(round) * round * round);
    out.per_arm_samples =
        ceil_count((2.0 / (out.epsilon * out.epsilon)) * std::log(2.0 / out.delta));
    return out;
}

int ege_round_cap(double gap_lower_bound) {
    if (!(gap_lower_bound > 0.0 && gap_lower_bound <= 1.0)) {
        throw std::invalid_argument("ege_round_cap: gap bound must lie in (0, 1]");
    }
    const int cap = static_cast<int>(std::ceil(std::log2(1.0 / gap_lower_bound)));
    return std::max(1, cap);
}

StrategyOutcome linked_ege(Environment& env, double delta, double gap_lower_bound,
                           const EgeOptions& options, EgeTrace* trace) {
    validate_delta(delta, "linked_ege");
    if (!(gap_lower_bound > 0.0 && gap_lower_bound <= 1.0)) {
        throw std::invalid_argument("linked_ege: gap bound must lie in (0, 1]");
    }

    const int n = env.num_arms();
    std::vector<int> survivors(static_cast<std::size_t>(n));
    std::iota(survivors.begin(), survivors.end(), 1);
    if (trace) {
        trace->rounds_executed = 0;
        trace->survivors = survivors;
    }

    StrategyOutcome out;
    const std::uint64_t plays_before = env.plays();
    const int cap = ege_round_cap(gap_lower_bound);
    int reference = survivors.front();

    for (int r = 1; survivors.size() > 1 && r <= cap; ++r) {
        const EgeRound sched = ege_round(r, delta);
        const SuffixSampleResult res =
            suffix_sample(env, survivors, sched.per_arm_samples);
        out.line5_plays += res.plays_used;

        std::size_t ref_pos;
        if (options.fresh_median_elimination) {
            const int arm =
                median_elimination(env, survivors, sched.epsilon / 2.0, sched.delta);
            ref_pos = static_cast<std::size_t>(
                std::lower_bound(survivors.begin(), survivors.end(), arm) -
                survivors.begin());
        } else {
            // Median elimination over the reused round estimates halves a
            // fixed value set, so it lands on their argmax without plays.
            ref_pos = argmax_position(res.fresh_means);
        }
        reference = survivors[ref_pos];
        const double threshold = res.fresh_means[ref_pos] - sched.epsilon;

        std::vector<int> next;
        next.reserve(survivors.size());
        for (std::size_t j = 0; j < survivors.size(); ++j) {
            if (res.fresh_means[j] >= threshold) next.push_back(survivors[j]);
        }
        survivors = std::move(next);
        if (trace) {
            trace->rounds_executed = r;
            trace->survivors = survivors;
            trace->per_round_survivors.push_back(survivors);
        }
    }

    out.identified_arm = survivors.size() == 1 ? survivors.front() : reference;
    out.total_plays = env.plays() - plays_before;
    out.per_arm_samples = env.stats().sample_count;
    return out;
}

double lil_radius(std::uint64_t t, double omega, const LilConfig& cfg) {
    if (t < 2) return std::numeric_limits<double>::infinity();
    const double eps = cfg.epsilon;
    const double inner = std::log((1.0 + eps) * static_cast<double>(t)) / omega;
    const double arg = std::max(inner, std::numbers::e);
    return (1.0 + std::sqrt(eps)) *
           std::sqrt((1.0 + eps) * std::log(arg) / (2.0 * static_cast<double>(t)));
}

std::optional<int> lil_stopped(const ArmStats& stats, double delta,
                               const LilConfig& cfg) {
    validate_delta(delta, "lil_stopped");
    const int n = stats.num_arms();
    const double omega = delta / static_cast<double>(n);

    for (std::uint64_t t : stats.sample_count) {
        if (t < 2) return std::nullopt;
    }

    std::vector<double> lcb(static_cast<std::size_t>(n));
    std::vector<double> ucb(static_cast<std::size_t>(n));
    for (int arm = 1; arm <= n; ++arm) {
        const std::size_t i = static_cast<std::size_t>(arm) - 1;
        const double mean = *stats.empirical_mean(arm);
        const double radius = lil_radius(stats.sample_count[i], omega, cfg);
        lcb[i] = mean - radius;
        ucb[i] = mean + radius;
    }

    // Radii are strictly positive, so at most one arm can dominate; it must
    // be the one with the highest lower bound.
    std::size_t cand = 0;
    for (std::size_t i = 1; i < lcb.size(); ++i) {
        if (lcb[i] > lcb[cand]) cand = i;
    }
    for (std::size_t j = 0; j < ucb.size(); ++j) {
        if (j != cand && lcb[cand] < ucb[j]) return std::nullopt;
    }
    return static_cast<int>(cand) + 1;
}

StrategyOutcome maximal_sampling_lil(Environment& env, double delta,
                                     const LilConfig& cfg) {
    validate_delta(delta, "maximal_sampling_lil");
    const PlayRequest request = PlayRequest::full(env.num_arms());
    PlayFeedback fb;
    StopCheckSchedule checks;
    const std::uint64_t plays_before = env.plays();

    try {
        for (;;) {
            env.play_prevalidated(request, fb);
            const std::uint64_t used = env.plays() - plays_before;
            if (checks.due(used)) {
                if (const auto arm = lil_stopped(env.stats(), delta, cfg)) {
                    StrategyOutcome out;
                    out.identified_arm = *arm;
                    out.total_plays = used;
                    out.line5_plays = used;
                    out.per_arm_samples = env.stats().sample_count;
                    return out;
                }
            }
        }
    } catch (const PlayCapReached& cause) {
        throw with_low_sample_diagnostic(env, cause);
    }
}

StrategyOutcome uniform_sampling_lil(Environment& env, double delta,
                                     const LilConfig& cfg) {
    validate_delta(delta, "uniform_sampling_lil");
    std::vector<int> arms(static_cast<std::size_t>(env.num_arms()));
    std::iota(arms.begin(), arms.end(), 1);
    StopCheckSchedule checks;
    const std::uint64_t plays_before = env.plays();

    try {
        for (std::uint64_t batch = 16;; batch *= 2) {
            suffix_sample(env, arms, batch);
            const std::uint64_t used = env.plays() - plays_before;
            if (checks.due(used)) {
                if (const auto arm = lil_stopped(env.stats(), delta, cfg)) {
                    StrategyOutcome out;
                    out.identified_arm = *arm;
                    out.total_plays = used;
                    out.line5_plays = used;
                    out.per_arm_samples = env.stats().sample_count;
                    return out;
                }
            }
        }
    } catch (const PlayCapReached& cause) {
        throw with_low_sample_diagnostic(env, cause);
    }
}

}  // namespace linked
