#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linked/complexity.hpp"
#include "linked/env.hpp"
#include "linked/harness.hpp"

namespace {

using namespace linked;

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what) + ": not an integer: " + item);
        }
    }
    if (out.empty()) {
        throw CLI::ValidationError(std::string(what) + ": empty list");
    }
    return out;
}

int cmd_run(const std::string& scenario_name, int n, const std::string& n_grid_csv,
            double delta, const std::string& strategy_name, int trials,
            std::uint64_t seed, int best_index, const std::string& means_path,
            const std::string& out_path, const std::string& svg_path,
            std::uint64_t play_cap, int threads) {
    ScenarioConfig config;
    const auto kind = parse_scenario(scenario_name);
    if (!kind) throw CLI::ValidationError("unknown scenario: " + scenario_name);
    config.kind = *kind;
    if (config.kind == ScenarioKind::File && means_path.empty()) {
        throw CLI::ValidationError("--means is required for the file scenario");
    }
    if (config.kind != ScenarioKind::File) {
        if (n == 0 && n_grid_csv.empty()) {
            throw CLI::ValidationError("one of --n or --n-grid is required");
        }
        if (n != 0 && !n_grid_csv.empty()) {
            throw CLI::ValidationError("--n and --n-grid are mutually exclusive");
        }
        config.n_grid = n != 0 ? std::vector<int>{n}
                               : parse_int_list(n_grid_csv, "--n-grid");
    }
    if (strategy_name == "all") {
        config.strategies = {StrategyKind::Maximal, StrategyKind::Uniform,
                             StrategyKind::Ege};
    } else {
        const auto strategy = parse_strategy(strategy_name);
        if (!strategy) throw CLI::ValidationError("unknown strategy: " + strategy_name);
        config.strategies = {*strategy};
    }
    config.delta = delta;
    config.trials = trials;
    config.seed = seed;
    config.best_index = best_index;
    config.means_path = means_path;
    config.play_cap = play_cap;
    config.threads = threads;

    const std::vector<RunResult> rows = run_experiment(config);
    emit_csv(rows, out_path);
    if (!svg_path.empty()) {
        emit_svg(rows, config, svg_path);
    }

    std::size_t failed = 0;
    for (const RunResult& row : rows) {
        if (!row.fail_reason.empty()) ++failed;
    }
    std::cout << rows.size() << " trials -> " << out_path;
    if (failed > 0) std::cout << " (" << failed << " failed)";
    std::cout << '\n';
    if (failed == rows.size()) {
        std::cerr << "error: every trial failed\n";
        return 2;
    }
    return 0;
}

int cmd_bounds(const std::string& means_path, double delta) {
    const std::vector<double> means = read_means_file(means_path);
    const GapProfile profile = gap_profile(means);
    const BoundReport report = evaluate_bounds(means, delta);

    std::cout << "arms: " << profile.num_arms() << '\n';
    std::cout << "best arm: " << profile.best_index << " (mean " << profile.best_mean
              << ")\n";
    std::cout << "min gap: " << profile.min_gap << '\n';
    std::cout << "gaps:";
    for (double g : profile.gaps) std::cout << ' ' << g;
    std::cout << '\n';
    std::cout << "survival prefix (first n-1 arms): " << profile.survival_prefix << '\n';
    std::cout << "survival all: " << profile.survival_all << '\n';
    std::cout << "bounds at delta=" << delta << " (" << BoundReport::kConvention
              << "):\n";
    std::cout << "  maximal: " << report.maximal << '\n';
    std::cout << "  uniform: " << report.uniform << '\n';
    std::cout << "  ege:     " << report.ege << '\n';
    std::cout << "  lower:   " << report.lower << '\n';
    return 0;
}

int cmd_play(const std::string& means_path, const std::string& select_csv,
             std::uint64_t seed) {
    const BanditInstance instance(read_means_file(means_path));
    PlayRequest request;
    request.indices = parse_int_list(select_csv, "--select");
    request.validate(instance.num_arms());

    RngStream rng(seed, 0);
    const PlayFeedback fb = play(instance, request, rng);
    std::cout << "sampled:";
    for (int arm : fb.sampled) std::cout << ' ' << arm;
    std::cout << "\nrewards:";
    for (auto r : fb.rewards) std::cout << ' ' << int(r);
    std::cout << '\n';
    std::cout << (fb.ends_in_success()
                      ? "ended with a positive reward\n"
                      : "no positive reward, full subsequence revealed\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"best-arm identification experiments for linked bandits"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run Monte Carlo trials, emit CSV and SVG");
    std::string scenario, n_grid_csv, strategy = "all", means_path, out_path, svg_path;
    int n = 0, trials = 1, best_index = 0, threads = 0;
    double delta = 0.1;
    std::uint64_t seed = 0, play_cap = linked::kDefaultPlayCap;
    run->add_option("--scenario", scenario,
                    "one-sparse|decreasing|increasing|file")->required();
    run->add_option("--n", n, "arm count");
    run->add_option("--n-grid", n_grid_csv, "comma-separated arm counts");
    run->add_option("--delta", delta, "confidence level in (0,1)")->required();
    run->add_option("--strategy", strategy, "maximal|uniform|ege|all")->required();
    run->add_option("--trials", trials, "trials per cell")->required();
    run->add_option("--seed", seed, "base seed")->required();
    run->add_option("--best-index", best_index, "best arm position (one-sparse)");
    run->add_option("--means", means_path, "means file (file scenario)");
    run->add_option("--out", out_path, "output CSV path")->required();
    run->add_option("--svg", svg_path, "optional SVG plot path");
    run->add_option("--play-cap", play_cap, "hard per-trial play cap");
    run->add_option("--threads", threads, "worker threads (0 = auto)");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "print gap profile and bound values");
    std::string bounds_means;
    double bounds_delta = 0.1;
    bounds->add_option("--means", bounds_means, "means file")->required();
    bounds->add_option("--delta", bounds_delta, "confidence level in (0,1)")->required();

    // play
    auto* play_cmd = app.add_subcommand("play", "execute one play and print feedback");
    std::string play_means, select_csv;
    std::uint64_t play_seed = 0;
    play_cmd->add_option("--means", play_means, "means file")->required();
    play_cmd->add_option("--select", select_csv, "comma-separated arm indices")->required();
    play_cmd->add_option("--seed", play_seed, "seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            return cmd_run(scenario, n, n_grid_csv, delta, strategy, trials, seed,
                           best_index, means_path, out_path, svg_path, play_cap,
                           threads);
        }
        if (bounds->parsed()) {
            return cmd_bounds(bounds_means, bounds_delta);
        }
        if (play_cmd->parsed()) {
            return cmd_play(play_means, select_csv, play_seed);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
