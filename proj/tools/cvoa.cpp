// Command-line front end: seeded runs and bit-length sweeps.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <cvoa/report/config.hpp>
#include <cvoa/report/runner.hpp>

namespace {

namespace fs = std::filesystem;
using namespace cvoa::report;

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> repeat;
    std::optional<int> strains;
    std::size_t jobs = 1;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Base seed (run k uses seed + k)");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--repeat", o.repeat, "Number of seeded runs")->check(CLI::PositiveNumber);
    cmd->add_option("--strains", o.strains, "Number of concurrent strains")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", o.jobs, "Runs executed in parallel")->check(CLI::PositiveNumber);
}

RunConfig resolve(const Overrides& o) {
    RunConfig c = load_config(o.config_path);
    if (o.seed) c.parameters.seed = *o.seed;
    if (o.out) c.output_dir = *o.out;
    if (o.repeat) c.repeat = *o.repeat;
    if (o.strains) c.parameters.strains = *o.strains;
    if (auto v = cvoa::parameter_violations(c.parameters); !v.empty())
        throw ConfigError(cvoa::InvalidParameters(v).what());
    return c;
}

int run_command(const Overrides& o) {
    const RunConfig config = resolve(o);
    const fs::path root = config.output_dir;
    fs::create_directories(root);

    const auto seeds = repeat_seeds(config);
    std::vector<std::optional<RunOutcome>> results(seeds.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex log_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size() && !failed; i = next++) {
            const auto dir = run_directory(root, i, seeds.size());
            try {
                results[i] = execute_run(config, seeds[i]);
                write_run_artifacts(*results[i], dir);
            } catch (const RunFailed& e) {
                write_run_artifacts(e.partial(), dir);
                std::lock_guard lock(log_mutex);
                std::cerr << "run with seed " << seeds[i] << " failed: " << e.what() << "\n";
                failed = true;
            }
        }
    };
    const std::size_t jobs = std::min<std::size_t>(o.jobs, seeds.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (failed) return 2;

    std::vector<RunOutcome> runs;
    for (auto& r : results) runs.push_back(std::move(*r));
    write_file(root / "summary.json", summary_json(runs).dump(2) + "\n");

    const auto a = aggregate(runs);
    std::cout << "runs: " << a.runs << "  successes: " << a.successes << "  best: " << runs.front().best_genotype
              << " (fitness " << format_number(runs.front().best_fitness) << ")\n"
              << "artifacts written to " << root.string() << "\n";
    return 0;
}

int sweep_command(const Overrides& o, const std::vector<int>& lengths) {
    const RunConfig config = resolve(o);
    const auto rows = sweep(config, lengths, o.jobs);
    const auto csv = sweep_csv(rows);
    fs::create_directories(config.output_dir);
    write_file(fs::path(config.output_dir) / "sweep.csv", csv);
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coronavirus optimization algorithm: seeded runs and sweeps"};
    app.require_subcommand(1);

    Overrides run_opts;
    auto* run = app.add_subcommand("run", "Run a configuration and write iterations.csv, summary.json, best.txt");
    add_common(run, run_opts);

    Overrides sweep_opts;
    std::vector<int> lengths;
    auto* sw = app.add_subcommand("sweep", "Repeat a binary configuration over several bit lengths");
    add_common(sw, sweep_opts);
    sw->add_option("--lengths", lengths, "Comma-separated bit lengths")->required()->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(run_opts);
        return sweep_command(sweep_opts, lengths);
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
