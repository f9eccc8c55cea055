#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linked {

// Splitmix-style counter generator: the state advances by a fixed odd
// increment and each output is a bijective mix of the counter, so streams
// keyed by (seed, stream_id) are independent and exactly reproducible.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : state_(mix(seed + kIncrement) ^
                 mix(stream_id * kIncrement + 0x632be59bd9b4e019ull)) {}

    std::uint64_t next_u64() {
        state_ += kIncrement;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Consumes exactly one draw per call. p = 0 never fires, p = 1 always.
    bool bernoulli(double p) { return next_unit() < p; }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    bool operator==(const RngStream&) const = default;

private:
    static constexpr std::uint64_t kIncrement = 0x9e3779b97f4a7c15ull;
    std::uint64_t state_;
};

// Ground-truth Bernoulli means in the fixed arm order. Arms are indexed
// 1..n everywhere in the public interface.
class BanditInstance {
public:
    explicit BanditInstance(std::vector<double> means);

    int num_arms() const { return static_cast<int>(means_.size()); }
    double mean(int arm) const { return means_[static_cast<std::size_t>(arm) - 1]; }
    const std::vector<double>& means() const { return means_; }

    // True when the maximum mean is attained at exactly one index. Not
    // enforced at construction: identification code rejects ties itself.
    bool has_unique_best() const;

private:
    std::vector<double> means_;
};

// An ordered subsequence of arms: strictly increasing, nonempty indices.
struct PlayRequest {
    std::vector<int> indices;

    static PlayRequest full(int num_arms);
    void validate(int num_arms) const;  // throws std::invalid_argument
};

// The revealed prefix of one play: rewards of the request's arms up to and
// including the first 1. If no arm rewarded, the full request is revealed.
struct PlayFeedback {
    std::vector<int> sampled;           // prefix of the request indices
    std::vector<std::uint8_t> rewards;  // same length; at most one 1, at the end

    bool ends_in_success() const {
        return !rewards.empty() && rewards.back() == 1;
    }
};

// Per-arm cumulative reward X_i and sample count t_i.
struct ArmStats {
    std::vector<std::uint64_t> cum_reward;
    std::vector<std::uint64_t> sample_count;

    ArmStats() = default;
    explicit ArmStats(int num_arms)
        : cum_reward(static_cast<std::size_t>(num_arms), 0),
          sample_count(static_cast<std::size_t>(num_arms), 0) {}

    int num_arms() const { return static_cast<int>(sample_count.size()); }

    // Undefined (nullopt) while t_i == 0; an unsampled arm is never mean 0.
    std::optional<double> empirical_mean(int arm) const {
        const auto i = static_cast<std::size_t>(arm) - 1;
        if (sample_count[i] == 0) return std::nullopt;
        return static_cast<double>(cum_reward[i]) / static_cast<double>(sample_count[i]);
    }
};

std::vector<std::optional<double>> empirical_means(const ArmStats& stats);

// Returns the 1-based index of the largest defined entry, lowest index on
// ties; 0 when no entry is defined.
int argmax_defined(const std::vector<std::optional<double>>& values);

// Play decomposition ledger: every play ends with exactly one positive
// reward (u_i for its arm) or none (empty_count), so
// total_plays == sum_i u_i + empty_count holds exactly at all times.
struct PlayLedger {
    std::uint64_t total_plays = 0;
    std::vector<std::uint64_t> success_count;
    std::uint64_t empty_count = 0;

    PlayLedger() = default;
    explicit PlayLedger(int num_arms)
        : success_count(static_cast<std::size_t>(num_arms), 0) {}

    bool identity_holds() const;
};

// Draws Bernoulli rewards lazily in request order and stops immediately
// after the first 1, so exactly one draw is consumed per sampled arm and
// unobserved arms never touch the stream.
void play(const BanditInstance& instance, const PlayRequest& request,
          RngStream& rng, PlayFeedback& out);
PlayFeedback play(const BanditInstance& instance, const PlayRequest& request,
                  RngStream& rng);

void record(ArmStats& stats, PlayLedger& ledger, const PlayFeedback& feedback);

inline constexpr std::uint64_t kDefaultPlayCap = 100'000'000ull;

// Thrown when an environment would exceed its configured play cap.
class PlayCapReached : public std::runtime_error {
public:
    PlayCapReached(std::uint64_t plays, const std::string& what)
        : std::runtime_error(what), plays_(plays) {}
    std::uint64_t plays() const { return plays_; }

private:
    std::uint64_t plays_;
};

// One trial's environment: executes plays against the ground truth,
// accumulates cumulative stats and the ledger, and enforces the play cap.
// Owned by exactly one logical thread; cross-trial parallelism uses
// independent Environment instances with independent streams.
class Environment {
public:
    Environment(BanditInstance instance, RngStream rng,
                std::uint64_t play_cap = kDefaultPlayCap);

    int num_arms() const { return instance_.num_arms(); }
    const BanditInstance& instance() const { return instance_; }
    const ArmStats& stats() const { return stats_; }
    const PlayLedger& ledger() const { return ledger_; }
    std::uint64_t plays() const { return ledger_.total_plays; }
    std::uint64_t play_cap() const { return play_cap_; }

    void play(const PlayRequest& request, PlayFeedback& out);
    PlayFeedback play(const PlayRequest& request);

    // Skips request validation; callers own the validity contract.
    void play_prevalidated(const PlayRequest& request, PlayFeedback& out);

private:
    BanditInstance instance_;
    RngStream rng_;
    ArmStats stats_;
    PlayLedger ledger_;
    std::uint64_t play_cap_;
};

}  // namespace linked
