#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linked/complexity.hpp"
#include "linked/env.hpp"
#include "linked/strategies.hpp"

namespace linked {

enum class ScenarioKind { OneSparse, Decreasing, Increasing, File };
enum class StrategyKind { Maximal, Uniform, Ege };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(StrategyKind kind);
std::optional<ScenarioKind> parse_scenario(std::string_view name);
std::optional<StrategyKind> parse_strategy(std::string_view name);

// Mean vectors of the generated scenarios:
//   one-sparse: 0.1 at the best index (default n), 0.05 elsewhere
//   decreasing: mu_1 = 0.05, mu_i = 0.05 - 0.005 * 0.95^((n - i)/2) for i != 1
//   increasing: mu_i = i / n
BanditInstance make_scenario(ScenarioKind kind, int n, int best_index = 0);

// One decimal literal per line; blank lines and lines starting with '#' are
// ignored. Line k holds mu_k.
std::vector<double> read_means_file(const std::string& path);

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::OneSparse;
    std::vector<int> n_grid;
    int best_index = 0;  // one-sparse only; 0 selects the default (n)
    double delta = 0.1;
    std::vector<StrategyKind> strategies;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string means_path;  // kind == File
    std::uint64_t play_cap = kDefaultPlayCap;
    int threads = 0;  // 0 = hardware default
};

struct RunResult {
    std::string scenario;
    int n = 0;
    StrategyKind strategy = StrategyKind::Maximal;
    int trial = 0;
    std::uint64_t stream = 0;  // derived stream id, the trial's seed column
    double delta = 0.0;
    std::uint64_t plays_total = 0;
    std::uint64_t plays_line5 = 0;
    std::uint64_t samples_total = 0;
    int identified_arm = 0;  // 0 on a failed trial
    bool correct = false;
    std::string fail_reason;  // empty on success
};

struct TrialOutcome {
    std::uint64_t plays_total = 0;
    std::uint64_t plays_line5 = 0;
    std::uint64_t samples_total = 0;
    int identified_arm = 0;
    bool correct = false;
    std::string fail_reason;
};

std::uint64_t derive_stream_id(std::uint64_t seed, ScenarioKind kind, int n,
                               StrategyKind strategy, int trial);

// Runs one strategy on a fresh environment. Maximal and uniform use the LIL
// stopping rule; linked EGE receives the instance's true minimum gap. A play
// cap abort is reported as a failed trial with reason "play cap".
TrialOutcome run_trial(const BanditInstance& instance, StrategyKind strategy,
                       double delta, RngStream rng,
                       std::uint64_t play_cap = kDefaultPlayCap);

// Cartesian product of (n grid) x (strategies) x (trials). Trials execute on
// a small thread pool; rows come back in the deterministic
// (n, strategy, trial) order regardless of scheduling.
std::vector<RunResult> run_experiment(const ScenarioConfig& config);

// Header (exact order): scenario,n,strategy,trial,seed,delta,plays_total,
// plays_line5,samples_total,identified_arm,correct,fail_reason.
// UTF-8, LF line endings, '.' decimal separator.
void emit_csv(const std::vector<RunResult>& rows, std::ostream& out);
void emit_csv(const std::vector<RunResult>& rows, const std::string& path);
std::vector<RunResult> parse_csv(std::istream& in);

// Mean plays against n per strategy, one log-scaled panel per scenario in
// the table, with optional dashed bound overlays evaluated from the config's
// scenario means.
struct SvgOptions {
    bool bounds_overlay = true;
};
void emit_svg(const std::vector<RunResult>& rows, const ScenarioConfig& config,
              const std::string& path, const SvgOptions& options = {});

}  // namespace linked
