#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include <cvoa/codecs/binary.hpp>
#include <cvoa/codecs/external_evaluator.hpp>
#include <cvoa/codecs/net.hpp>
#include <cvoa/engine/multi_strain.hpp>
#include <cvoa/engine/strain.hpp>
#include <cvoa/report/config.hpp>

namespace cvoa::report {

inline constexpr std::string_view iterations_header = "Iteration,Deaths,Recovered,Infected,Fitness";

/// Result of one seeded execution, codec-independent.
struct RunOutcome {
    std::uint64_t seed = 0;
    std::vector<std::vector<IterationRecord>> strain_histories;
    std::string best_genotype;
    double best_fitness = 0.0;
    std::size_t evaluations_total = 0;
    double search_space_size = 0.0;
    Termination termination = Termination::DurationReached;
    std::optional<int> iterations_to_optimum;

    double evaluated_fraction() const {
        return search_space_size > 0 ? std::min(1.0, static_cast<double>(evaluations_total) / search_space_size)
                                     : 0.0;
    }
};

/// A run stopped on an evaluation error; completed iterations are attached.
class RunFailed : public std::runtime_error {
public:
    RunFailed(const std::string& what, RunOutcome partial) : std::runtime_error(what), partial_(std::move(partial)) {}
    const RunOutcome& partial() const noexcept { return partial_; }

private:
    RunOutcome partial_;
};

/// Shortest decimal form that round-trips.
inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string iterations_csv(std::span<const IterationRecord> history) {
    std::string out(iterations_header);
    out += '\n';
    for (const auto& r : history) {
        out += std::to_string(r.iteration) + ',' + std::to_string(r.deaths_total) + ',' +
               std::to_string(r.recovered_total) + ',' + std::to_string(r.infected_count) + ',' +
               format_number(r.best_fitness) + '\n';
    }
    return out;
}

namespace detail {

template <MetricCodec C, typename Format>
RunOutcome execute_with(const RunConfig& config, const C& codec, std::uint64_t seed, std::optional<double> optimum,
                        Format&& format) {
    using G = typename C::genotype_type;
    EpidemicParameters params = config.parameters;
    params.seed = seed;

    RunOutcome out;
    out.seed = seed;
    out.search_space_size = codec.search_space_size();
    const std::optional<double> stop = config.stop_on_optimum ? optimum : std::nullopt;

    if (params.strains <= 1) {
        StrainOptions<G> options;
        options.target_fitness = stop;
        options.evaluation_threads = config.evaluation_threads;
        RandomSource rng(seed);
        try {
            auto r = run_strain(params, codec, rng, options);
            out.strain_histories.push_back(r.history);
            out.best_genotype = format(r.best.genotype);
            out.best_fitness = r.best.fitness;
            out.evaluations_total = r.evaluations_total;
            out.termination = r.termination;
            if (optimum) out.iterations_to_optimum = iterations_to_target(r, *optimum, params.objective);
        } catch (const StrainAborted& e) {
            out.strain_histories.push_back(e.partial_history());
            throw RunFailed(e.what(), std::move(out));
        }
        return out;
    }

    auto multi = MultiStrainConfig::uniform(params, params.strains, config.pz_strategy);
    multi.target_fitness = stop;
    multi.evaluation_threads = config.evaluation_threads;
    try {
        auto r = run_pandemic(multi, codec);
        for (const auto& s : r.strains) out.strain_histories.push_back(s.history);
        out.best_genotype = format(r.best.genotype);
        out.best_fitness = r.best.fitness;
        out.evaluations_total = r.evaluations_total;
        out.termination = r.strains[r.best_strain].termination;
        if (optimum) out.iterations_to_optimum = iterations_to_target(r, *optimum, params.objective);
    } catch (const PandemicAborted& e) {
        out.strain_histories = e.partial_histories();
        throw RunFailed(e.what(), std::move(out));
    }
    return out;
}

} // namespace detail

/// Target genotype for a surrogate net run.
inline net::NetGenotype surrogate_target(const NetCodecConfig& c) {
    if (c.surrogate_target) return *c.surrogate_target;
    RandomSource rng(splitmix64(c.target_seed.value_or(0)));
    return net::generate_net_patient_zero(rng);
}

/// Executes one seeded run of `config`.
inline RunOutcome execute_run(const RunConfig& config, std::uint64_t seed) {
    return std::visit(
        [&](const auto& codec_config) -> RunOutcome {
            using T = std::decay_t<decltype(codec_config)>;
            if constexpr (std::is_same_v<T, BinaryCodecConfig>) {
                binary::BinaryCodec codec(codec_config.bits, codec_config.target);
                return detail::execute_with(config, codec, seed, binary::BinaryCodec::optimum,
                                            [](const binary::BitGenotype& g) { return g.to_string(); });
            } else {
                const auto format = [](const net::NetGenotype& g) { return g.to_string(); };
                if (codec_config.uses_surrogate()) {
                    net::NetCodec codec(net::SurrogateObjective{surrogate_target(codec_config)});
                    return detail::execute_with(config, codec, seed, 0.0, format);
                }
                net::NetCodec codec(net::ExternalEvaluator(*codec_config.evaluator_command));
                return detail::execute_with(config, codec, seed, std::nullopt, format);
            }
        },
        config.codec);
}

/// Seeds used for `config.repeat` runs: base, base+1, ...
inline std::vector<std::uint64_t> repeat_seeds(const RunConfig& config) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(config.repeat));
    std::iota(seeds.begin(), seeds.end(), config.parameters.seed);
    return seeds;
}

/// Runs every seed, `jobs` at a time. Output order follows `seeds`.
/// The first failure is rethrown after all workers finish.
inline std::vector<RunOutcome> execute_runs(const RunConfig& config, std::span<const std::uint64_t> seeds,
                                            std::size_t jobs = 1) {
    std::vector<std::optional<RunOutcome>> results(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                results[i] = execute_run(config, seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, seeds.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<RunOutcome> out;
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

struct Aggregates {
    std::size_t runs = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    std::optional<double> mean_iterations_to_optimum;   ///< over successful runs
    std::optional<double> median_iterations_to_optimum; ///< over successful runs
    double mean_evaluated_fraction = 0.0;
    double mean_evaluations = 0.0;
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

inline Aggregates aggregate(std::span<const RunOutcome> runs) {
    Aggregates a;
    a.runs = runs.size();
    std::vector<double> its;
    double fraction = 0.0, evaluations = 0.0;
    for (const auto& r : runs) {
        if (r.iterations_to_optimum) its.push_back(*r.iterations_to_optimum);
        fraction += r.evaluated_fraction();
        evaluations += static_cast<double>(r.evaluations_total);
    }
    a.successes = its.size();
    if (!runs.empty()) {
        a.success_rate = static_cast<double>(a.successes) / static_cast<double>(runs.size());
        a.mean_evaluated_fraction = fraction / static_cast<double>(runs.size());
        a.mean_evaluations = evaluations / static_cast<double>(runs.size());
    }
    if (!its.empty()) {
        a.mean_iterations_to_optimum = std::accumulate(its.begin(), its.end(), 0.0) / static_cast<double>(its.size());
        a.median_iterations_to_optimum = median(its);
    }
    return a;
}

inline nlohmann::ordered_json summary_json(std::span<const RunOutcome> runs) {
    using nlohmann::ordered_json;
    auto optional_number = [](const auto& o) { return o ? ordered_json(*o) : ordered_json(nullptr); };

    ordered_json j;
    j["runs"] = ordered_json::array();
    for (const auto& r : runs) {
        ordered_json run;
        run["seed"] = r.seed;
        run["iterations_to_optimum"] = optional_number(r.iterations_to_optimum);
        run["best_fitness"] = r.best_fitness;
        run["best_genotype"] = r.best_genotype;
        run["evaluations_total"] = r.evaluations_total;
        run["evaluated_fraction"] = r.evaluated_fraction();
        run["termination"] = std::string(to_string(r.termination));
        run["iterations"] = r.strain_histories.empty() ? 0 : r.strain_histories.front().size();
        j["runs"].push_back(std::move(run));
    }
    const auto a = aggregate(runs);
    ordered_json agg;
    agg["runs"] = a.runs;
    agg["successes"] = a.successes;
    agg["success_rate"] = a.success_rate;
    agg["mean_iterations_to_optimum"] = optional_number(a.mean_iterations_to_optimum);
    agg["median_iterations_to_optimum"] = optional_number(a.median_iterations_to_optimum);
    agg["mean_evaluated_fraction"] = a.mean_evaluated_fraction;
    j["aggregates"] = std::move(agg);
    return j;
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

/// Writes iterations.csv (one per strain when there are several) and best.txt.
inline void write_run_artifacts(const RunOutcome& run, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    if (run.strain_histories.size() == 1) {
        write_file(dir / "iterations.csv", iterations_csv(run.strain_histories.front()));
    } else {
        for (std::size_t i = 0; i < run.strain_histories.size(); ++i)
            write_file(dir / ("iterations_strain" + std::to_string(i) + ".csv"),
                       iterations_csv(run.strain_histories[i]));
    }
    if (!run.best_genotype.empty()) write_file(dir / "best.txt", run.best_genotype + "\n");
}

/// Directory of run `index` among `count` runs under `root`.
inline std::filesystem::path run_directory(const std::filesystem::path& root, std::size_t index, std::size_t count) {
    if (count == 1) return root;
    std::string name = std::to_string(index + 1);
    name.insert(0, name.size() < 3 ? 3 - name.size() : 0, '0');
    return root / ("run_" + name);
}

struct SweepRow {
    int length = 0;
    double search_space_size = 0.0;
    Aggregates aggregates;
};

inline std::string sweep_csv(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << "Length,SearchSpace,Runs,Successes,MeanIterationsToOptimum,MedianIterationsToOptimum,MeanEvaluated,"
           "EvaluatedPercent\n";
    for (const auto& r : rows) {
        const auto& a = r.aggregates;
        out << r.length << ',' << format_number(r.search_space_size) << ',' << a.runs << ',' << a.successes << ','
            << (a.mean_iterations_to_optimum ? format_number(*a.mean_iterations_to_optimum) : "") << ','
            << (a.median_iterations_to_optimum ? format_number(*a.median_iterations_to_optimum) : "") << ','
            << format_number(a.mean_evaluations) << ',' << format_number(100.0 * a.mean_evaluated_fraction) << '\n';
    }
    return out.str();
}

/// Repeats the binary configuration for each bit length, stopping every run
/// at the optimum so that evaluation counts measure the search effort.
inline std::vector<SweepRow> sweep(const RunConfig& config, std::span<const int> lengths, std::size_t jobs = 1) {
    if (!std::holds_alternative<BinaryCodecConfig>(config.codec))
        throw ConfigError("sweep requires a binary codec configuration");
    std::vector<SweepRow> rows;
    for (int length : lengths) {
        RunConfig c = config;
        auto& codec = std::get<BinaryCodecConfig>(c.codec);
        if (length < binary::min_bits || length > binary::max_bits)
            throw ConfigError("sweep length " + std::to_string(length) + " outside [8, 64]");
        codec.bits = length;
        c.stop_on_optimum = true;
        const auto seeds = repeat_seeds(c);
        const auto runs = execute_runs(c, seeds, jobs);
        rows.push_back({length, binary::BinaryCodec(length).search_space_size(), aggregate(runs)});
    }
    return rows;
}

} // namespace cvoa::report
