#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <cvoa/core/codec.hpp>
#include <cvoa/core/parameters.hpp>
#include <cvoa/core/random.hpp>
#include <cvoa/engine/ledger.hpp>

namespace cvoa {

/// One row of a strain's trace, taken at the end of an iteration.
struct IterationRecord {
    int iteration = 0;
    std::size_t deaths_total = 0;     ///< cumulative insertions into dead
    std::size_t recovered_total = 0;  ///< cumulative insertions into recovered
    std::size_t infected_count = 0;   ///< infected population entering the next iteration
    double best_fitness = 0.0;        ///< best-so-far
    std::size_t evaluations_total = 0;///< distinct genotypes evaluated so far

    friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

enum class Termination {
    Extinction,      ///< no infected individuals left
    DurationReached, ///< pandemic_duration iterations completed
    TargetReached,   ///< best fitness reached the requested target
    Cancelled,       ///< stopped from outside (another strain failed or finished)
};

constexpr std::string_view to_string(Termination t) noexcept {
    switch (t) {
    case Termination::Extinction: return "extinction";
    case Termination::DurationReached: return "duration_reached";
    case Termination::TargetReached: return "target_reached";
    case Termination::Cancelled: return "cancelled";
    }
    return "?";
}

template <Genotype G>
struct StrainResult {
    EvaluatedIndividual<G> patient_zero;
    EvaluatedIndividual<G> best;
    std::vector<IterationRecord> history;
    Termination termination = Termination::DurationReached;
    std::size_t evaluations_total = 0;

    friend bool operator==(const StrainResult&, const StrainResult&) = default;
};

/// An evaluation error interrupted a strain; the completed iterations are kept.
class StrainAborted : public EvaluationError {
public:
    StrainAborted(const std::string& what, std::vector<IterationRecord> partial)
        : EvaluationError(what), history_(std::move(partial)) {}

    const std::vector<IterationRecord>& partial_history() const noexcept { return history_; }

private:
    std::vector<IterationRecord> history_;
};

/// Hooks for instrumentation. All are optional and run on the strain's thread.
template <Genotype G>
struct StrainObserver {
    /// Called after the death phase with the spreaders of this iteration.
    std::function<void(int iteration, std::span<const G> infected)> on_spread_start;
    std::function<void(const G& candidate, Disposition)> on_disposition;
    /// Called at the end of each iteration with the new infected population.
    std::function<void(const IterationRecord&, std::span<const G> new_infected)> on_iteration;
};

template <Genotype G>
struct StrainOptions {
    /// Overrides the codec's random patient zero (used by multi-strain seeding).
    std::optional<G> patient_zero;
    /// Stop as soon as best-so-far reaches this value.
    std::optional<double> target_fitness;
    /// Worker threads for evaluating one iteration's new infections.
    std::size_t evaluation_threads = 1;
    /// Checked at the start of every iteration; true stops the strain.
    std::atomic<bool>* cancel = nullptr;
    /// When reaching the target, also raise `cancel` so sibling strains stop.
    bool cancel_on_target = false;
    /// Receives every batch of newly evaluated genotypes (patient zero first).
    std::function<void(std::span<const G>)> on_evaluated;
    StrainObserver<G> observer;
};

/// True when `fitness` is at least as good as `target`.
constexpr bool reaches(double fitness, double target, Objective objective) noexcept {
    return !improves(target, fitness, objective);
}

namespace detail {

/// Strict ordering used to pick a unique best: better fitness first, then by
/// genotype hash, then by the genotype's own ordering.
template <Genotype G>
bool precedes(const G& a, double fa, const G& b, double fb, Objective objective) {
    if (improves(fa, fb, objective)) return true;
    if (improves(fb, fa, objective)) return false;
    const auto ha = std::hash<G>{}(a);
    const auto hb = std::hash<G>{}(b);
    if (ha != hb) return ha < hb;
    return a < b;
}

} // namespace detail

/// Best individual of a non-empty population. Ties on fitness go to the
/// individual that comes first in (hash, genotype) order, so the winner does
/// not depend on the container's iteration order.
template <Genotype G>
const EvaluatedIndividual<G>& select_best(std::span<const EvaluatedIndividual<G>> population, Objective objective) {
    if (population.empty()) throw std::invalid_argument("select_best: empty population");
    const EvaluatedIndividual<G>* best = &population.front();
    for (const auto& ind : population.subspan(1)) {
        if (detail::precedes(ind.genotype, ind.fitness, best->genotype, best->fitness, objective)) best = &ind;
    }
    return *best;
}

template <Genotype G>
const EvaluatedIndividual<G>& select_best(const std::vector<EvaluatedIndividual<G>>& population, Objective objective) {
    return select_best(std::span<const EvaluatedIndividual<G>>(population), objective);
}

/// Selects the dying members of `infected`: one draw per member, each dies
/// with probability p_die. Order follows `infected`.
template <Genotype G>
std::vector<G> die(std::span<const G> infected, const EpidemicParameters& params, RandomSource& rng) {
    std::vector<G> dying;
    for (const auto& g : infected) {
        if (rng.uniform() < params.p_die) dying.push_back(g);
    }
    return dying;
}

/// Offers one replicated candidate to the ledger; fresh R3/R4 draw per call.
template <Genotype G, LedgerFor<G> Ledger>
Disposition new_infection(const G& candidate, Ledger& ledger, const EpidemicParameters& params, RandomSource& rng) {
    return ledger.admit(candidate, params, [&rng] { return rng.uniform(); });
}

/// Spreads the disease from one infected individual.
///
/// Draws the travel decision (R1) and the super-spreader decision (R2), then
/// the number of replicas from the matching spread range. Returns the
/// candidates that joined the new-infected population.
template <Codec C, LedgerFor<typename C::genotype_type> Ledger>
std::vector<typename C::genotype_type> infect(const typename C::genotype_type& individual, Ledger& ledger,
                                              const EpidemicParameters& params, const C& codec, RandomSource& rng,
                                              const StrainObserver<typename C::genotype_type>* observer = nullptr) {
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    const DistanceMode mode = r1 < params.p_travel ? DistanceMode::Traveler : DistanceMode::Ordinary;
    const SpreadRange& range =
        r2 < params.p_superspreader ? params.superspreader_spread_range : params.ordinary_spread_range;
    const auto count = rng.uniform_int(range.low, range.high);

    std::vector<typename C::genotype_type> infected;
    for (std::int64_t k = 0; k < count; ++k) {
        auto child = codec.replicate(individual, mode, params.traveler_rate, rng);
        const Disposition d = new_infection(child, ledger, params, rng);
        if (observer && observer->on_disposition) observer->on_disposition(child, d);
        if (d == Disposition::AddedToNewInfected || d == Disposition::Reinfected) infected.push_back(std::move(child));
    }
    return infected;
}

namespace detail {

template <Codec C>
void evaluate_pending(const C& codec, std::span<const typename C::genotype_type> pending, std::span<double> out,
                      std::size_t threads) {
    if (threads <= 1 || pending.size() < 2 * threads) {
        for (std::size_t i = 0; i < pending.size(); ++i) out[i] = checked_fitness(codec, pending[i]);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (pending.size() + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(pending.size(), begin + chunk);
            if (begin >= end) break;
            workers.emplace_back([&, t, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) out[i] = checked_fitness(codec, pending[i]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace detail

/// Runs one strain to completion against `ledger`.
///
/// Per iteration: the dying leave the infected population for dead, every
/// survivor infects, new infections are evaluated once (memoized for the
/// whole run), best-so-far is updated from the new infections, spreaders
/// recover and the new infections become the infected population.
template <Codec C, LedgerFor<typename C::genotype_type> Ledger>
StrainResult<typename C::genotype_type> run_strain(const EpidemicParameters& params, const C& codec,
                                                   RandomSource& rng, Ledger& ledger,
                                                   const StrainOptions<typename C::genotype_type>& options = {}) {
    using G = typename C::genotype_type;
    const auto& obs = options.observer;

    std::unordered_map<G, double> cache;
    std::vector<IterationRecord> history;
    const auto abort = [&](const std::exception& e) -> StrainAborted {
        return StrainAborted(e.what(), history);
    };

    G pz = options.patient_zero ? *options.patient_zero : codec.generate_patient_zero(rng);
    double pz_fitness = 0.0;
    try {
        pz_fitness = checked_fitness(codec, pz);
    } catch (const std::exception& e) {
        throw abort(e);
    }
    cache.emplace(pz, pz_fitness);
    if (options.on_evaluated) options.on_evaluated(std::span<const G>(&pz, 1));

    StrainResult<G> result;
    result.patient_zero = {pz, pz_fitness};
    result.best = result.patient_zero;

    std::vector<G> infected{pz};
    std::vector<G> pending;
    std::vector<double> pending_fitness;

    const auto target_reached = [&] {
        return options.target_fitness && reaches(result.best.fitness, *options.target_fitness, params.objective);
    };

    result.termination = Termination::DurationReached;
    if (target_reached()) {
        result.termination = Termination::TargetReached;
    } else {
        for (int time = 0; time < params.pandemic_duration; ++time) {
            if (infected.empty()) break;
            if (options.cancel && options.cancel->load(std::memory_order_relaxed)) {
                result.termination = Termination::Cancelled;
                break;
            }

            for (const auto& g : die(std::span<const G>(infected), params, rng)) ledger.kill(g);
            std::erase_if(infected, [&](const G& g) { return ledger.is_dead(g); });
            if (obs.on_spread_start) obs.on_spread_start(time + 1, infected);

            std::vector<G> new_infected;
            for (const auto& spreader : infected) {
                // Another strain may have killed it since the death phase.
                if (ledger.is_dead(spreader)) continue;
                auto added = infect(spreader, ledger, params, codec, rng, &obs);
                new_infected.insert(new_infected.end(), std::make_move_iterator(added.begin()),
                                    std::make_move_iterator(added.end()));
            }

            pending.clear();
            for (const auto& g : new_infected)
                if (!cache.contains(g)) pending.push_back(g);
            pending_fitness.assign(pending.size(), 0.0);
            try {
                detail::evaluate_pending(codec, std::span<const G>(pending), std::span<double>(pending_fitness),
                                         options.evaluation_threads);
            } catch (const std::exception& e) {
                for (const auto& g : new_infected) ledger.release(g);
                throw abort(e);
            }
            for (std::size_t i = 0; i < pending.size(); ++i) cache.emplace(pending[i], pending_fitness[i]);
            if (options.on_evaluated && !pending.empty()) options.on_evaluated(pending);

            const G* iteration_best = nullptr;
            double iteration_best_fitness = 0.0;
            for (const auto& g : new_infected) {
                const double f = cache.at(g);
                if (!iteration_best ||
                    detail::precedes(g, f, *iteration_best, iteration_best_fitness, params.objective)) {
                    iteration_best = &g;
                    iteration_best_fitness = f;
                }
            }
            if (iteration_best && improves(iteration_best_fitness, result.best.fitness, params.objective))
                result.best = {*iteration_best, iteration_best_fitness};

            for (const auto& g : infected) ledger.recover(g);
            for (const auto& g : new_infected) ledger.release(g);
            infected = std::move(new_infected);

            history.push_back(IterationRecord{time + 1, ledger.deaths_total(), ledger.recovered_total(),
                                              infected.size(), result.best.fitness, cache.size()});
            if (obs.on_iteration) obs.on_iteration(history.back(), infected);

            if (target_reached()) {
                result.termination = Termination::TargetReached;
                if (options.cancel_on_target && options.cancel) options.cancel->store(true);
                break;
            }
        }
        if (result.termination == Termination::DurationReached && infected.empty())
            result.termination = Termination::Extinction;
    }

    result.history = std::move(history);
    result.evaluations_total = cache.size();
    return result;
}

/// Runs one strain against a private ledger.
template <Codec C>
StrainResult<typename C::genotype_type> run_strain(const EpidemicParameters& params, const C& codec,
                                                   RandomSource& rng,
                                                   const StrainOptions<typename C::genotype_type>& options = {}) {
    PopulationLedger<typename C::genotype_type> ledger;
    return run_strain(params, codec, rng, ledger, options);
}

/// First iteration at which best-so-far reaches `target` (0 when the patient
/// zero already does); empty when it never does.
template <Genotype G>
std::optional<int> iterations_to_target(const StrainResult<G>& result, double target, Objective objective) {
    if (reaches(result.patient_zero.fitness, target, objective)) return 0;
    for (const auto& r : result.history)
        if (reaches(r.best_fitness, target, objective)) return r.iteration;
    return std::nullopt;
}

} // namespace cvoa
