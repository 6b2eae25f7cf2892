#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <cvoa/core/codec.hpp>
#include <cvoa/core/parameters.hpp>
#include <cvoa/core/random.hpp>
#include <cvoa/engine/ledger.hpp>
#include <cvoa/engine/strain.hpp>

namespace cvoa {

enum class PzStrategy { Random, MaxHammingSpread };

struct MultiStrainConfig {
    /// One parameter set per strain; each strain seeds its own generator
    /// from its `seed`.
    std::vector<EpidemicParameters> strains;
    PzStrategy pz_strategy = PzStrategy::Random;
    /// Optional stop value; the first strain to reach it stops the others.
    std::optional<double> target_fitness;
    std::size_t evaluation_threads = 1;

    /// `count` copies of `params`. Strain 0 keeps `params.seed`, so a
    /// one-strain pandemic reproduces the single-strain run.
    static MultiStrainConfig uniform(const EpidemicParameters& params, int count,
                                     PzStrategy strategy = PzStrategy::Random) {
        MultiStrainConfig cfg;
        cfg.pz_strategy = strategy;
        for (int i = 0; i < count; ++i) {
            EpidemicParameters p = params;
            p.strains = count;
            if (i > 0) p.seed = splitmix64(params.seed + static_cast<std::uint64_t>(i));
            cfg.strains.push_back(p);
        }
        return cfg;
    }
};

/// Throws InvalidParameters listing every problem with `config`.
inline void validate_config(const MultiStrainConfig& config) {
    std::vector<std::string> violations;
    if (config.strains.empty()) violations.emplace_back("at least one strain is required");
    std::unordered_set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < config.strains.size(); ++i) {
        for (auto& v : parameter_violations(config.strains[i]))
            violations.push_back("strain " + std::to_string(i) + ": " + v);
        if (!seeds.insert(config.strains[i].seed).second)
            violations.push_back("strain " + std::to_string(i) + ": seed is not distinct");
    }
    if (config.strains.size() > 1) {
        const auto objective = config.strains.front().objective;
        for (const auto& s : config.strains)
            if (s.objective != objective) {
                violations.emplace_back("all strains must share one objective direction");
                break;
            }
    }
    if (!violations.empty()) throw InvalidParameters(std::move(violations));
}

/// Draws `n` patient zeros.
///
/// Random: `n` independent draws. MaxHammingSpread: from a pool of 50·n random
/// genotypes, start from the farthest pair and greedily add the genotype whose
/// distance to the chosen set is largest (farthest-point selection).
template <MetricCodec C>
std::vector<typename C::genotype_type> seed_patient_zeros(std::size_t n, const C& codec, PzStrategy strategy,
                                                          RandomSource& rng) {
    using G = typename C::genotype_type;
    if (n == 0) throw std::invalid_argument("seed_patient_zeros: n must be >= 1");
    if (static_cast<double>(n) > codec.search_space_size())
        throw std::invalid_argument("seed_patient_zeros: more patient zeros than distinct genotypes");

    if (strategy == PzStrategy::Random || n == 1) {
        std::vector<G> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(codec.generate_patient_zero(rng));
        return out;
    }

    const std::size_t pool_size = 50 * n;
    std::vector<G> pool;
    pool.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) pool.push_back(codec.generate_patient_zero(rng));

    std::size_t first = 0, second = 1, widest = 0;
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const std::size_t d = codec.distance(pool[i], pool[j]);
            if (d > widest) {
                widest = d;
                first = i;
                second = j;
            }
        }

    std::vector<G> chosen{pool[first], pool[second]};
    std::vector<std::size_t> nearest(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        nearest[i] = std::min(codec.distance(pool[i], chosen[0]), codec.distance(pool[i], chosen[1]));

    while (chosen.size() < n) {
        const auto it = std::max_element(nearest.begin(), nearest.end());
        const std::size_t pick = static_cast<std::size_t>(it - nearest.begin());
        if (*it == 0) throw std::invalid_argument("seed_patient_zeros: candidate pool has too few distinct genotypes");
        chosen.push_back(pool[pick]);
        for (std::size_t i = 0; i < pool.size(); ++i)
            nearest[i] = std::min(nearest[i], codec.distance(pool[i], pool[pick]));
    }
    return chosen;
}

template <Genotype G>
struct PandemicResult {
    EvaluatedIndividual<G> best;
    std::size_t best_strain = 0;
    std::vector<StrainResult<G>> strains;
    /// Distinct genotypes evaluated by any strain.
    std::size_t evaluations_total = 0;
};

/// A strain failed; the others were cancelled. Histories of every strain up
/// to the interruption are attached.
class PandemicAborted : public EvaluationError {
public:
    PandemicAborted(const std::string& what, std::vector<std::vector<IterationRecord>> partial)
        : EvaluationError(what), partial_(std::move(partial)) {}

    const std::vector<std::vector<IterationRecord>>& partial_histories() const noexcept { return partial_; }

private:
    std::vector<std::vector<IterationRecord>> partial_;
};

/// Seed for the patient-zero spreading draw, derived from the strain seeds.
inline std::uint64_t seeding_seed(const MultiStrainConfig& config) {
    std::uint64_t s = 0x5EEDu;
    for (const auto& p : config.strains) s = splitmix64(s ^ p.seed);
    return s;
}

/// Runs every strain on its own thread against one SharedLedger and merges
/// the results. `observers` may be empty or hold one observer per strain.
template <MetricCodec C>
PandemicResult<typename C::genotype_type> run_pandemic(
    const MultiStrainConfig& config, const C& codec, SharedLedger<typename C::genotype_type>& ledger,
    const std::vector<StrainObserver<typename C::genotype_type>>& observers = {}) {
    using G = typename C::genotype_type;
    validate_config(config);
    const std::size_t n = config.strains.size();

    std::vector<std::optional<G>> patient_zeros(n);
    if (config.pz_strategy == PzStrategy::MaxHammingSpread && n > 1) {
        RandomSource seeding(seeding_seed(config));
        auto pzs = seed_patient_zeros(n, codec, config.pz_strategy, seeding);
        for (std::size_t i = 0; i < n; ++i) patient_zeros[i] = pzs[i];
    }

    std::atomic<bool> cancel{false};
    std::mutex evaluated_mutex;
    std::unordered_set<G> evaluated;
    std::vector<std::optional<StrainResult<G>>> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::vector<IterationRecord>> partial(n);
    {
        std::vector<std::jthread> workers;
        workers.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            workers.emplace_back([&, i] {
                StrainOptions<G> options;
                options.patient_zero = patient_zeros[i];
                options.target_fitness = config.target_fitness;
                options.evaluation_threads = config.evaluation_threads;
                options.cancel = &cancel;
                options.cancel_on_target = true;
                options.on_evaluated = [&](std::span<const G> batch) {
                    std::lock_guard lock(evaluated_mutex);
                    evaluated.insert(batch.begin(), batch.end());
                };
                if (i < observers.size()) options.observer = observers[i];
                try {
                    RandomSource rng(config.strains[i].seed);
                    results[i] = run_strain(config.strains[i], codec, rng, ledger, options);
                } catch (const StrainAborted& e) {
                    partial[i] = e.partial_history();
                    errors[i] = std::current_exception();
                    cancel.store(true);
                } catch (...) {
                    errors[i] = std::current_exception();
                    cancel.store(true);
                }
            });
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (results[j]) partial[j] = results[j]->history;
        std::string what = "strain " + std::to_string(i) + " failed";
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            what += ": ";
            what += e.what();
        } catch (...) {
        }
        throw PandemicAborted(what, std::move(partial));
    }

    PandemicResult<G> out;
    out.evaluations_total = evaluated.size();
    const auto objective = config.strains.front().objective;
    for (std::size_t i = 0; i < n; ++i) {
        out.strains.push_back(std::move(*results[i]));
        const auto& b = out.strains.back().best;
        if (i == 0 || detail::precedes(b.genotype, b.fitness, out.best.genotype, out.best.fitness, objective)) {
            out.best = b;
            out.best_strain = i;
        }
    }
    return out;
}

template <MetricCodec C>
PandemicResult<typename C::genotype_type> run_pandemic(const MultiStrainConfig& config, const C& codec) {
    SharedLedger<typename C::genotype_type> ledger;
    return run_pandemic(config, codec, ledger);
}

/// Earliest iteration at which any strain reached `target`.
template <Genotype G>
std::optional<int> iterations_to_target(const PandemicResult<G>& result, double target, Objective objective) {
    std::optional<int> best;
    for (const auto& s : result.strains)
        if (auto it = iterations_to_target(s, target, objective); it && (!best || *it < *best)) best = it;
    return best;
}

} // namespace cvoa
