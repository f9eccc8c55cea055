#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "linked/env.hpp"

namespace linked {

struct StrategyOutcome {
    int identified_arm = 0;  // 1-based; 0 when nothing could be identified
    std::uint64_t total_plays = 0;
    // Plays issued outside median-elimination calls. Equals total_plays for
    // every strategy except linked_ege with fresh median elimination.
    std::uint64_t line5_plays = 0;
    std::vector<std::uint64_t> per_arm_samples;
    bool under_sampled = false;  // some arm was never sampled
};

struct SuffixSampleResult {
    std::vector<int> arms;  // the subset, in the fixed arm order
    std::vector<std::uint64_t> fresh_samples;    // per arm of `arms`; == t on return
    std::vector<std::uint64_t> fresh_successes;  // positive rewards during the call
    std::vector<double> fresh_means;
    std::uint64_t plays_used = 0;
};

// Plays shrinking suffixes of `arms` until the leading arm of each suffix
// holds exactly t fresh samples, so every arm ends with exactly t samples
// attributable to this call. The play count satisfies
// plays_used == t + sum of fresh_successes over all but the last arm,
// exactly on every run.
SuffixSampleResult suffix_sample(Environment& env, const std::vector<int>& arms,
                                 std::uint64_t t);

// Plays the full sequence `num_plays` times and returns the empirical argmax
// over arms that were sampled at least once. Arms with zero samples are
// excluded and flag the outcome as under-sampled.
StrategyOutcome maximal_sampling_fixed(Environment& env, std::uint64_t num_plays);

// One suffix_sample over all arms with per-arm count t, then the argmax of
// the fresh means.
StrategyOutcome uniform_sampling_fixed(Environment& env, std::uint64_t t);

// Halving elimination returning an epsilon-optimal arm of `arms` with
// probability at least 1 - delta. Round l samples each surviving arm
// ceil((4/eps_l^2) ln(3/delta_l)) times via suffix_sample, drops arms with
// mean strictly below the median, then updates eps_{l+1} = (3/4) eps_l,
// delta_{l+1} = delta_l / 2, starting from eps_1 = eps/4, delta_1 = delta/2.
// Arms exactly at the median survive; a singleton input returns immediately
// with zero plays.
int median_elimination(Environment& env, std::vector<int> arms, double epsilon,
                       double delta);

// Elimination schedule of round r: eps_r = 2^-r / 4, delta_r = delta/(50 r^3),
// per-arm count ceil((2/eps_r^2) ln(2/delta_r)).
struct EgeRound {
    int round = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint64_t per_arm_samples = 0;
};
EgeRound ege_round(int round, double delta);

// ceil(log2(1/gap)), clamped to at least one round so a reference arm always
// exists when n > 1.
int ege_round_cap(double gap_lower_bound);

struct EgeOptions {
    // When false (default), the round's reference arm is picked by running
    // the median-elimination halving over the reused round estimates, which
    // lands on their argmax and issues no extra plays. When true, a fresh
    // median_elimination run with its own suffix-sample plays is used; its
    // plays count toward total_plays but not line5_plays.
    bool fresh_median_elimination = false;
};

struct EgeTrace {
    int rounds_executed = 0;
    std::vector<int> survivors;  // after the last executed round
    std::vector<std::vector<int>> per_round_survivors;
};

// Exponential-gap elimination over suffix sampling. gap_lower_bound must be
// a positive lower bound on the true minimum gap, in (0, 1].
StrategyOutcome linked_ege(Environment& env, double delta, double gap_lower_bound,
                           const EgeOptions& options = {}, EgeTrace* trace = nullptr);

struct LilConfig {
    double epsilon = 0.01;  // slack of the iterated-logarithm radius
    // The Bernoulli variance proxy 1/4 is folded into the 1/(2t) factor.
};

// (1 + sqrt(eps)) * sqrt((1 + eps) ln(ln((1 + eps) t)/omega) / (2t)), with
// the outer log's argument clamped below at e so the radius stays real.
// Arms with t < 2 report an infinite radius and cannot stop.
double lil_radius(std::uint64_t t, double omega, const LilConfig& cfg = {});

// Returns arm i iff every arm has at least 2 samples and i's lower
// confidence bound clears every other arm's upper bound, at per-arm
// confidence omega = delta / n. At most one arm can qualify.
std::optional<int> lil_stopped(const ArmStats& stats, double delta,
                               const LilConfig& cfg = {});

// Anytime wrappers: play until the LIL rule stops, checking whenever the
// play count first exceeds ceil(1.5^k). The maximal variant repeats the
// full sequence; the uniform variant accumulates suffix_sample batches with
// doubling per-arm counts 16, 32, 64, ... into the cumulative stats. The
// environment's play cap aborts runs that cannot stop (maximal sampling can
// starve later arms structurally).
StrategyOutcome maximal_sampling_lil(Environment& env, double delta,
                                     const LilConfig& cfg = {});
StrategyOutcome uniform_sampling_lil(Environment& env, double delta,
                                     const LilConfig& cfg = {});

}  // namespace linked
