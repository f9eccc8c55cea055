#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "linked/env.hpp"
#include "linked/harness.hpp"
#include "linked/strategies.hpp"

using namespace linked;

namespace {

Environment fresh_env(std::vector<double> means, std::uint64_t seed,
                      std::uint64_t stream = 0,
                      std::uint64_t cap = kDefaultPlayCap) {
    return Environment(BanditInstance(std::move(means)), RngStream(seed, stream), cap);
}

}  // namespace

TEST_CASE("suffix_sample rejects bad input") {
    auto env = fresh_env({0.5, 0.5}, 3);
    CHECK_THROWS_AS(suffix_sample(env, {}, 10), std::invalid_argument);
    CHECK_THROWS_AS(suffix_sample(env, {1, 2}, 0), std::invalid_argument);
    CHECK_THROWS_AS(suffix_sample(env, {2, 1}, 10), std::invalid_argument);
    CHECK_THROWS_AS(suffix_sample(env, {1, 3}, 10), std::invalid_argument);
}

TEST_CASE("suffix_sample on a singleton uses exactly t plays") {
    auto env = fresh_env({0.37}, 11);
    const auto res = suffix_sample(env, {1}, 500);
    CHECK(res.plays_used == 500);
    CHECK(res.fresh_samples == std::vector<std::uint64_t>{500});
    CHECK(env.plays() == 500);
}

TEST_CASE("suffix_sample with zero means uses exactly t plays") {
    auto env = fresh_env({0.0, 0.0, 0.0, 0.0, 0.0}, 12);
    const auto res = suffix_sample(env, {1, 2, 3, 4, 5}, 100);
    CHECK(res.plays_used == 100);
    for (auto c : res.fresh_samples) CHECK(c == 100);
    for (auto s : res.fresh_successes) CHECK(s == 0);
}

TEST_CASE("suffix_sample exactness and play identity over random instances") {
    RngStream pick(77);
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(pick.next_u64() % 8);
        std::vector<double> means(static_cast<std::size_t>(n));
        for (double& m : means) m = pick.next_unit() * 0.9;
        // random nonempty ordered subset
        std::vector<int> subset;
        while (subset.empty()) {
            subset.clear();
            for (int arm = 1; arm <= n; ++arm) {
                if (pick.next_unit() < 0.6) subset.push_back(arm);
            }
        }
        const std::uint64_t t = 1 + pick.next_u64() % 500;

        auto env = fresh_env(means, 1000 + static_cast<std::uint64_t>(round));
        const auto res = suffix_sample(env, subset, t);

        for (auto c : res.fresh_samples) REQUIRE(c == t);
        std::uint64_t successes_before_last = 0;
        for (std::size_t j = 0; j + 1 < subset.size(); ++j) {
            successes_before_last += res.fresh_successes[j];
        }
        REQUIRE(res.plays_used == t + successes_before_last);
        REQUIRE(env.ledger().identity_holds());
    }
}

TEST_CASE("suffix_sample play count concentrates around its mean") {
    // Four arms at 0.5, t = 2000: expected plays t(1 + mu_1 + mu_2 + mu_3) = 5000.
    const std::uint64_t t = 2000;
    const int reps = 200;
    const double expected = 5000.0;
    const double tail_eps = std::sqrt(double(t) * 3.0 * std::log(100.0) / 2.0);

    double total = 0.0;
    int tail_hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        auto env = fresh_env({0.5, 0.5, 0.5, 0.5}, 500, static_cast<std::uint64_t>(rep));
        const auto res = suffix_sample(env, {1, 2, 3, 4}, t);
        total += static_cast<double>(res.plays_used);
        if (static_cast<double>(res.plays_used) > expected + tail_eps) ++tail_hits;
    }
    const double mean = total / reps;
    CHECK(std::abs(mean - expected) < 0.02 * expected);
    CHECK(tail_hits <= 8);  // nominal tail 1% plus Monte Carlo slack
}

TEST_CASE("maximal_sampling_fixed flags structurally starved arms") {
    auto env = fresh_env({1.0, 0.5}, 21);
    const auto out = maximal_sampling_fixed(env, 40);
    CHECK(out.total_plays == 40);
    CHECK(out.per_arm_samples[0] == 40);
    CHECK(out.per_arm_samples[1] == 0);
    CHECK(out.under_sampled);
    CHECK(out.identified_arm == 1);
}

TEST_CASE("maximal_sampling_fixed breaks ties toward the lowest index") {
    auto env = fresh_env({0.0, 0.0, 0.0}, 22);
    const auto out = maximal_sampling_fixed(env, 50);
    for (auto c : out.per_arm_samples) CHECK(c == 50);
    CHECK_FALSE(out.under_sampled);
    CHECK(out.identified_arm == 1);
}

TEST_CASE("maximal_sampling_fixed at its budget identifies the best arm") {
    // One-sparse means, best first; budget from the closed-form complexity
    // evaluator at delta = 0.1 comes to 9107 plays.
    std::vector<double> means{0.1, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
    int correct = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto env = fresh_env(means, 600, static_cast<std::uint64_t>(trial));
        const auto out = maximal_sampling_fixed(env, 9107);
        if (out.identified_arm == 1) ++correct;
    }
    CHECK(correct >= 180);
}

TEST_CASE("uniform_sampling_fixed samples every arm exactly t times") {
    auto env1 = fresh_env({0.9}, 23);
    const auto single = uniform_sampling_fixed(env1, 7);
    CHECK(single.identified_arm == 1);
    CHECK(single.total_plays == 7);

    auto env2 = fresh_env({0.3, 0.8, 0.1}, 24);
    const auto out = uniform_sampling_fixed(env2, 123);
    for (auto c : out.per_arm_samples) CHECK(c == 123);
}

TEST_CASE("uniform_sampling_fixed at its budget identifies the best arm") {
    // t = ceil((8/Delta^2) ln(2n/delta)) = 16955 at Delta = 0.05, delta = 0.1.
    std::vector<double> means{0.1, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
    int correct = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto env = fresh_env(means, 601, static_cast<std::uint64_t>(trial));
        const auto out = uniform_sampling_fixed(env, 16955);
        if (out.identified_arm == 1) ++correct;
    }
    CHECK(correct >= 180);
}

TEST_CASE("median_elimination returns a singleton without plays") {
    auto env = fresh_env({0.4, 0.2}, 25);
    CHECK(median_elimination(env, {2}, 0.1, 0.1) == 2);
    CHECK(env.plays() == 0);
}

TEST_CASE("median_elimination finds an epsilon-optimal arm") {
    int correct = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto env = fresh_env({0.9, 0.1}, 602, static_cast<std::uint64_t>(trial));
        if (median_elimination(env, {1, 2}, 0.1, 0.1) == 1) ++correct;
    }
    CHECK(correct >= 180);
}

TEST_CASE("median_elimination terminates on equal means") {
    auto env = fresh_env({0.5, 0.5}, 26);
    const int arm = median_elimination(env, {1, 2}, 0.2, 0.2);
    CHECK((arm == 1 || arm == 2));  // both are epsilon-optimal
}

TEST_CASE("elimination schedule matches its closed form") {
    const std::uint64_t expected_t[5] = {885, 4602, 20897, 90658, 384568};
    for (int r = 1; r <= 5; ++r) {
        const EgeRound round = ege_round(r, 0.1);
        CHECK(round.epsilon == std::ldexp(0.25, -r));
        CHECK(round.delta == doctest::Approx(0.1 / (50.0 * r * r * r)).epsilon(1e-15));
        CHECK(round.per_arm_samples == expected_t[r - 1]);
    }
    // eps halves, delta decreases, t increases
    for (int r = 1; r < 8; ++r) {
        CHECK(ege_round(r + 1, 0.1).epsilon == ege_round(r, 0.1).epsilon / 2.0);
        CHECK(ege_round(r + 1, 0.1).delta < ege_round(r, 0.1).delta);
        CHECK(ege_round(r + 1, 0.1).per_arm_samples > ege_round(r, 0.1).per_arm_samples);
    }
}

TEST_CASE("round cap follows the gap bound") {
    CHECK(ege_round_cap(0.05) == 5);
    CHECK(ege_round_cap(0.25) == 2);
    CHECK(ege_round_cap(0.5) == 1);
    CHECK(ege_round_cap(1.0) == 1);
    CHECK_THROWS_AS(ege_round_cap(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ege_round_cap(1.5), std::invalid_argument);
}

TEST_CASE("linked_ege on a single arm needs no plays") {
    auto env = fresh_env({0.2}, 27);
    const auto out = linked_ege(env, 0.1, 0.5);
    CHECK(out.identified_arm == 1);
    CHECK(out.total_plays == 0);
    CHECK(out.line5_plays == 0);
}

TEST_CASE("linked_ege validates the gap bound") {
    auto env = fresh_env({0.5, 0.1}, 28);
    CHECK_THROWS_AS(linked_ege(env, 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(linked_ege(env, 0.1, 1.0001), std::invalid_argument);
    CHECK_THROWS_AS(linked_ege(env, 1.5, 0.4), std::invalid_argument);
}

TEST_CASE("linked_ege identifies the best arm within the round cap") {
    std::vector<double> means{0.1, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
    int correct = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto env = fresh_env(means, 603, static_cast<std::uint64_t>(trial));
        EgeTrace trace;
        const auto out = linked_ege(env, 0.1, 0.05, {}, &trace);
        if (out.identified_arm == 1) ++correct;
        REQUIRE(trace.rounds_executed <= ege_round_cap(0.05));
        REQUIRE(out.total_plays == out.line5_plays);
    }
    CHECK(correct >= 90);
}

TEST_CASE("the best arm survives elimination with high probability") {
    // Allowed eviction fraction: delta + 3 sqrt(delta/trials) = 0.195.
    for (ScenarioKind kind :
         {ScenarioKind::OneSparse, ScenarioKind::Decreasing, ScenarioKind::Increasing}) {
        const BanditInstance instance = make_scenario(kind, 10);
        const GapProfile profile = gap_profile(instance.means());
        int evicted = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Environment env(instance, RngStream(700, static_cast<std::uint64_t>(trial)));
            EgeTrace trace;
            linked_ege(env, 0.1, profile.min_gap, {}, &trace);
            for (const auto& round : trace.per_round_survivors) {
                if (std::find(round.begin(), round.end(), profile.best_index) ==
                    round.end()) {
                    ++evicted;
                    break;
                }
            }
        }
        INFO("scenario ", to_string(kind));
        CHECK(evicted <= 19);
    }
}

TEST_CASE("linked_ege with fresh median elimination reports both play counts") {
    auto reuse_env = fresh_env({0.6, 0.1}, 29);
    const auto reuse = linked_ege(reuse_env, 0.1, 0.5);
    CHECK(reuse.total_plays == reuse.line5_plays);

    auto fresh_env_ = fresh_env({0.6, 0.1}, 29);
    EgeOptions options;
    options.fresh_median_elimination = true;
    const auto fresh = linked_ege(fresh_env_, 0.1, 0.5, options);
    CHECK(fresh.total_plays > fresh.line5_plays);
    CHECK(fresh.identified_arm == 1);
    CHECK(fresh.line5_plays >= ege_round(1, 0.1).per_arm_samples);
}

TEST_CASE("linked_ege runs are reproducible") {
    std::vector<double> means{0.3, 0.25, 0.2};
    auto run = [&] {
        auto env = fresh_env(means, 31, 9);
        const auto out = linked_ege(env, 0.1, 0.05);
        return std::make_tuple(out.identified_arm, out.total_plays, out.per_arm_samples);
    };
    CHECK(run() == run());
}

TEST_CASE("lil_radius closed form and shape") {
    CHECK(lil_radius(1, 0.01) == std::numeric_limits<double>::infinity());
    CHECK(lil_radius(100, 0.01) ==
          doctest::Approx(0.19361020675341442).epsilon(1e-12));

    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t t = 2; t < 2000000; t *= 3) {
        const double r = lil_radius(t, 0.01);
        CHECK(r < prev);
        prev = r;
    }
    // strictly decreasing in omega beyond the clamp region
    CHECK(lil_radius(100, 0.02) < lil_radius(100, 0.01));
    CHECK(lil_radius(100, 0.2) < lil_radius(100, 0.02));
}

TEST_CASE("lil_stopped needs two samples everywhere") {
    ArmStats stats(2);
    stats.sample_count = {50, 1};
    stats.cum_reward = {40, 1};
    CHECK_FALSE(lil_stopped(stats, 0.1).has_value());

    ArmStats single(1);
    single.sample_count = {2};
    single.cum_reward = {1};
    const auto arm = lil_stopped(single, 0.1);
    REQUIRE(arm.has_value());
    CHECK(*arm == 1);
}

TEST_CASE("lil_stopped separates well-spread arms") {
    int stopped_on_best = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto env = fresh_env({0.9, 0.1}, 604, static_cast<std::uint64_t>(trial));
        const auto out = uniform_sampling_lil(env, 0.1);
        if (out.identified_arm == 1) ++stopped_on_best;
    }
    CHECK(stopped_on_best >= 180);
}

TEST_CASE("uniform_sampling_lil stops a single arm after the first batch") {
    auto env = fresh_env({0.42}, 33);
    const auto out = uniform_sampling_lil(env, 0.1);
    CHECK(out.identified_arm == 1);
    CHECK(out.total_plays == 16);
    CHECK(out.per_arm_samples == std::vector<std::uint64_t>{16});
}

TEST_CASE("anytime wrappers identify the best arm") {
    int maximal_ok = 0, uniform_ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto env_m = fresh_env({0.1, 0.05}, 605, static_cast<std::uint64_t>(trial));
        if (maximal_sampling_lil(env_m, 0.1).identified_arm == 1) ++maximal_ok;
        auto env_u = fresh_env({0.1, 0.05}, 606, static_cast<std::uint64_t>(trial));
        if (uniform_sampling_lil(env_u, 0.1).identified_arm == 1) ++uniform_ok;
    }
    CHECK(maximal_ok >= 180);
    CHECK(uniform_ok >= 180);
}

TEST_CASE("maximal_sampling_lil aborts at the cap when an arm is unreachable") {
    auto env = fresh_env({1.0, 0.5}, 34, 0, 10000);
    try {
        maximal_sampling_lil(env, 0.1);
        FAIL("expected a play cap abort");
    } catch (const PlayCapReached& e) {
        CHECK(e.plays() == 10000);
        CHECK(std::string(e.what()).find("fewer than 2 samples") != std::string::npos);
        CHECK(std::string(e.what()).find('2') != std::string::npos);
    }
}
