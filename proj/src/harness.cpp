#include "linked/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace linked {

namespace {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::OneSparse: return "one-sparse";
        case ScenarioKind::Decreasing: return "decreasing";
        case ScenarioKind::Increasing: return "increasing";
        case ScenarioKind::File: return "file";
    }
    return "?";
}

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Maximal: return "maximal";
        case StrategyKind::Uniform: return "uniform";
        case StrategyKind::Ege: return "ege";
    }
    return "?";
}

std::optional<ScenarioKind> parse_scenario(std::string_view name) {
    if (name == "one-sparse") return ScenarioKind::OneSparse;
    if (name == "decreasing") return ScenarioKind::Decreasing;
    if (name == "increasing") return ScenarioKind::Increasing;
    if (name == "file") return ScenarioKind::File;
    return std::nullopt;
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
    if (name == "maximal") return StrategyKind::Maximal;
    if (name == "uniform") return StrategyKind::Uniform;
    if (name == "ege") return StrategyKind::Ege;
    return std::nullopt;
}

BanditInstance make_scenario(ScenarioKind kind, int n, int best_index) {
    if (n < 2) {
        throw std::invalid_argument("make_scenario: generated scenarios need n >= 2");
    }
    std::vector<double> means(static_cast<std::size_t>(n));
    switch (kind) {
        case ScenarioKind::OneSparse: {
            const int best = best_index == 0 ? n : best_index;
            if (best < 1 || best > n) {
                throw std::invalid_argument("make_scenario: best index outside [1, n]");
            }
            std::fill(means.begin(), means.end(), 0.05);
            means[static_cast<std::size_t>(best) - 1] = 0.1;
            break;
        }
        case ScenarioKind::Decreasing:
            means[0] = 0.05;
            for (int i = 2; i <= n; ++i) {
                means[static_cast<std::size_t>(i) - 1] =
                    0.05 - 0.005 * std::pow(0.95, (n - i) / 2.0);
            }
            break;
        case ScenarioKind::Increasing:
            for (int i = 1; i <= n; ++i) {
                means[static_cast<std::size_t>(i) - 1] =
                    static_cast<double>(i) / static_cast<double>(n);
            }
            break;
        case ScenarioKind::File:
            throw std::invalid_argument(
                "make_scenario: file scenarios come from read_means_file");
    }
    return BanditInstance(std::move(means));
}

std::vector<double> read_means_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open means file: " + path);
    }
    std::vector<double> means;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        double value = 0.0;
        const auto res = std::from_chars(body.data(), body.data() + body.size(), value);
        if (res.ec != std::errc{} || res.ptr != body.data() + body.size()) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": not a decimal literal: '" << body << "'";
            throw std::runtime_error(msg.str());
        }
        means.push_back(value);
    }
    if (means.empty()) {
        throw std::runtime_error("means file holds no arms: " + path);
    }
    return means;
}

std::uint64_t derive_stream_id(std::uint64_t seed, ScenarioKind kind, int n,
                               StrategyKind strategy, int trial) {
    std::uint64_t h = RngStream::mix(seed ^ 0x6c62272e07bb0142ull);
    h = RngStream::mix(h ^ (static_cast<std::uint64_t>(kind) + 1));
    h = RngStream::mix(h ^ static_cast<std::uint64_t>(n));
    h = RngStream::mix(h ^ (static_cast<std::uint64_t>(strategy) + 0x100));
    h = RngStream::mix(h ^ static_cast<std::uint64_t>(trial));
    return h;
}

TrialOutcome run_trial(const BanditInstance& instance, StrategyKind strategy,
                       double delta, RngStream rng, std::uint64_t play_cap) {
    const GapProfile profile = gap_profile(instance.means());
    Environment env(instance, rng, play_cap);
    TrialOutcome out;
    try {
        StrategyOutcome result;
        switch (strategy) {
            case StrategyKind::Maximal:
                result = maximal_sampling_lil(env, delta);
                break;
            case StrategyKind::Uniform:
                result = uniform_sampling_lil(env, delta);
                break;
            case StrategyKind::Ege:
                // A single arm has no gap; any bound works, the loop never runs.
                result = linked_ege(env, delta,
                                    instance.num_arms() == 1 ? 1.0 : profile.min_gap);
                break;
        }
        out.identified_arm = result.identified_arm;
        out.plays_total = result.total_plays;
        out.plays_line5 = result.line5_plays;
        out.samples_total = std::accumulate(result.per_arm_samples.begin(),
                                            result.per_arm_samples.end(),
                                            std::uint64_t{0});
        out.correct = result.identified_arm == profile.best_index;
    } catch (const PlayCapReached&) {
        out.fail_reason = "play cap";
        out.plays_total = env.plays();
        out.plays_line5 = env.plays();
        out.samples_total = std::accumulate(env.stats().sample_count.begin(),
                                            env.stats().sample_count.end(),
                                            std::uint64_t{0});
    }
    if (!env.ledger().identity_holds()) {
        throw std::logic_error("play ledger identity violated");
    }
    return out;
}

std::vector<RunResult> run_experiment(const ScenarioConfig& config) {
    if (config.trials < 1) {
        throw std::invalid_argument("run_experiment: trials must be >= 1");
    }
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        throw std::invalid_argument("run_experiment: delta must lie in (0, 1)");
    }
    if (config.strategies.empty()) {
        throw std::invalid_argument("run_experiment: no strategies selected");
    }

    // Resolve the instances up front so bad inputs reject before any trial.
    std::vector<std::pair<int, BanditInstance>> instances;
    if (config.kind == ScenarioKind::File) {
        BanditInstance instance(read_means_file(config.means_path));
        gap_profile(instance.means());
        instances.emplace_back(instance.num_arms(), std::move(instance));
    } else {
        if (config.n_grid.empty()) {
            throw std::invalid_argument("run_experiment: empty n grid");
        }
        for (int n : config.n_grid) {
            instances.emplace_back(n, make_scenario(config.kind, n, config.best_index));
        }
    }

    struct Task {
        const BanditInstance* instance;
        RunResult row;
    };
    std::vector<Task> tasks;
    for (const auto& [n, instance] : instances) {
        for (StrategyKind strategy : config.strategies) {
            for (int trial = 0; trial < config.trials; ++trial) {
                Task task;
                task.instance = &instance;
                task.row.scenario = std::string(to_string(config.kind));
                task.row.n = n;
                task.row.strategy = strategy;
                task.row.trial = trial;
                task.row.stream =
                    derive_stream_id(config.seed, config.kind, n, strategy, trial);
                task.row.delta = config.delta;
                tasks.push_back(std::move(task));
            }
        }
    }

    const int threads =
        std::max(1, std::min<int>(config.threads > 0 ? config.threads : default_threads(),
                                  static_cast<int>(tasks.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            Task& task = tasks[i];
            const TrialOutcome outcome =
                run_trial(*task.instance, task.row.strategy, config.delta,
                          RngStream(config.seed, task.row.stream), config.play_cap);
            task.row.plays_total = outcome.plays_total;
            task.row.plays_line5 = outcome.plays_line5;
            task.row.samples_total = outcome.samples_total;
            task.row.identified_arm = outcome.identified_arm;
            task.row.correct = outcome.correct;
            task.row.fail_reason = outcome.fail_reason;
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<RunResult> rows;
    rows.reserve(tasks.size());
    for (Task& task : tasks) rows.push_back(std::move(task.row));
    return rows;
}

void emit_csv(const std::vector<RunResult>& rows, std::ostream& out) {
    out << "scenario,n,strategy,trial,seed,delta,plays_total,plays_line5,"
           "samples_total,identified_arm,correct,fail_reason\n";
    for (const RunResult& row : rows) {
        out << row.scenario << ',' << row.n << ',' << to_string(row.strategy) << ','
            << row.trial << ',' << row.stream << ',' << format_double(row.delta) << ','
            << row.plays_total << ',' << row.plays_line5 << ',' << row.samples_total
            << ',' << row.identified_arm << ',' << (row.correct ? "true" : "false")
            << ',' << row.fail_reason << '\n';
    }
}

void emit_csv(const std::vector<RunResult>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write CSV file: " + path);
    }
    emit_csv(rows, out);
    if (!out.flush()) {
        throw std::runtime_error("failed writing CSV file: " + path);
    }
}

std::vector<RunResult> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("parse_csv: missing header");
    }
    std::vector<RunResult> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 12) {
            throw std::runtime_error("parse_csv: malformed row: " + line);
        }
        RunResult row;
        row.scenario = fields[0];
        row.n = std::stoi(fields[1]);
        const auto strategy = parse_strategy(fields[2]);
        if (!strategy) throw std::runtime_error("parse_csv: unknown strategy " + fields[2]);
        row.strategy = *strategy;
        row.trial = std::stoi(fields[3]);
        row.stream = std::stoull(fields[4]);
        row.delta = std::stod(fields[5]);
        row.plays_total = std::stoull(fields[6]);
        row.plays_line5 = std::stoull(fields[7]);
        row.samples_total = std::stoull(fields[8]);
        row.identified_arm = std::stoi(fields[9]);
        row.correct = fields[10] == "true";
        row.fail_reason = fields[11];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace linked
