#include "linked/env.hpp"

#include <numeric>
#include <sstream>

namespace linked {

BanditInstance::BanditInstance(std::vector<double> means) : means_(std::move(means)) {
    if (means_.empty()) {
        throw std::invalid_argument("BanditInstance: at least one arm is required");
    }
    for (std::size_t i = 0; i < means_.size(); ++i) {
        const double m = means_[i];
        if (!(m >= 0.0 && m <= 1.0)) {
            std::ostringstream msg;
            msg << "BanditInstance: mean of arm " << (i + 1) << " is " << m
                << ", outside [0, 1]";
            throw std::invalid_argument(msg.str());
        }
    }
}

bool BanditInstance::has_unique_best() const {
    double best = means_[0];
    int count = 1;
    for (std::size_t i = 1; i < means_.size(); ++i) {
        if (means_[i] > best) {
            best = means_[i];
            count = 1;
        } else if (means_[i] == best) {
            ++count;
        }
    }
    return count == 1;
}

PlayRequest PlayRequest::full(int num_arms) {
    PlayRequest req;
    req.indices.resize(static_cast<std::size_t>(num_arms));
    std::iota(req.indices.begin(), req.indices.end(), 1);
    return req;
}

void PlayRequest::validate(int num_arms) const {
    if (indices.empty()) {
        throw std::invalid_argument("PlayRequest: empty arm subsequence");
    }
    int prev = 0;
    for (int arm : indices) {
        if (arm < 1 || arm > num_arms) {
            std::ostringstream msg;
            msg << "PlayRequest: arm index " << arm << " outside [1, " << num_arms << "]";
            throw std::invalid_argument(msg.str());
        }
        if (arm <= prev) {
            std::ostringstream msg;
            msg << "PlayRequest: indices must be strictly increasing (" << arm
                << " after " << prev << ")";
            throw std::invalid_argument(msg.str());
        }
        prev = arm;
    }
}

std::vector<std::optional<double>> empirical_means(const ArmStats& stats) {
    std::vector<std::optional<double>> out(stats.sample_count.size());
    for (int arm = 1; arm <= stats.num_arms(); ++arm) {
        out[static_cast<std::size_t>(arm) - 1] = stats.empirical_mean(arm);
    }
    return out;
}

int argmax_defined(const std::vector<std::optional<double>>& values) {
    int best = 0;
    double best_value = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) continue;
        if (best == 0 || *values[i] > best_value) {
            best = static_cast<int>(i) + 1;
            best_value = *values[i];
        }
    }
    return best;
}

bool PlayLedger::identity_holds() const {
    std::uint64_t successes = 0;
    for (std::uint64_t u : success_count) successes += u;
    return total_plays == successes + empty_count;
}

void play(const BanditInstance& instance, const PlayRequest& request,
          RngStream& rng, PlayFeedback& out) {
    out.sampled.clear();
    out.rewards.clear();
    for (int arm : request.indices) {
        const bool hit = rng.bernoulli(instance.mean(arm));
        out.sampled.push_back(arm);
        out.rewards.push_back(hit ? 1 : 0);
        if (hit) break;
    }
}

PlayFeedback play(const BanditInstance& instance, const PlayRequest& request,
                  RngStream& rng) {
    request.validate(instance.num_arms());
    PlayFeedback fb;
    play(instance, request, rng, fb);
    return fb;
}

void record(ArmStats& stats, PlayLedger& ledger, const PlayFeedback& feedback) {
    for (std::size_t k = 0; k < feedback.sampled.size(); ++k) {
        const auto i = static_cast<std::size_t>(feedback.sampled[k]) - 1;
        stats.sample_count[i] += 1;
        stats.cum_reward[i] += feedback.rewards[k];
    }
    ledger.total_plays += 1;
    if (feedback.ends_in_success()) {
        ledger.success_count[static_cast<std::size_t>(feedback.sampled.back()) - 1] += 1;
    } else {
        ledger.empty_count += 1;
    }
}

Environment::Environment(BanditInstance instance, RngStream rng, std::uint64_t play_cap)
    : instance_(std::move(instance)),
      rng_(rng),
      stats_(instance_.num_arms()),
      ledger_(instance_.num_arms()),
      play_cap_(play_cap) {}

void Environment::play(const PlayRequest& request, PlayFeedback& out) {
    request.validate(num_arms());
    play_prevalidated(request, out);
}

PlayFeedback Environment::play(const PlayRequest& request) {
    PlayFeedback fb;
    play(request, fb);
    return fb;
}

void Environment::play_prevalidated(const PlayRequest& request, PlayFeedback& out) {
    if (ledger_.total_plays >= play_cap_) {
        std::ostringstream msg;
        msg << "play cap reached after " << ledger_.total_plays << " plays";
        throw PlayCapReached(ledger_.total_plays, msg.str());
    }
    linked::play(instance_, request, rng_, out);
    record(stats_, ledger_, out);
}

}  // namespace linked
