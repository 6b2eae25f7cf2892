#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include <cvoa/core/random.hpp>

namespace cvoa {

/// How far a replicated child may move away from its parent.
enum class DistanceMode { Ordinary, Traveler };

/// Fitness could not be produced (evaluator failure or non-finite value).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solution representation shared by the engine and the codecs: a regular,
/// totally ordered, hashable value. Ordering is only used to make iteration
/// orders deterministic; it carries no meaning for the search.
template <typename G>
concept Genotype = std::regular<G> && std::totally_ordered<G> && requires(const G& g) {
    { std::hash<G>{}(g) } -> std::convertible_to<std::size_t>;
};

/// A codification: how to draw a patient zero, how to replicate (one mutated
/// child per call) and how to score a genotype. `fitness` must be
/// deterministic per genotype and safe to call concurrently.
template <typename C>
concept Codec = requires {
    typename C::genotype_type;
} && Genotype<typename C::genotype_type> &&
    requires(const C& codec, const typename C::genotype_type& g, RandomSource& rng, DistanceMode mode,
             int traveler_rate) {
        { codec.generate_patient_zero(rng) } -> std::same_as<typename C::genotype_type>;
        { codec.replicate(g, mode, traveler_rate, rng) } -> std::same_as<typename C::genotype_type>;
        { codec.fitness(g) } -> std::convertible_to<double>;
    };

/// Codecs whose genotypes admit a Hamming-style distance and a finite
/// search-space cardinality; required for spread-out patient-zero seeding.
template <typename C>
concept MetricCodec = Codec<C> && requires(const C& codec, const typename C::genotype_type& a,
                                           const typename C::genotype_type& b) {
    { codec.distance(a, b) } -> std::convertible_to<std::size_t>;
    { codec.search_space_size() } -> std::convertible_to<double>;
};

template <Genotype G>
struct EvaluatedIndividual {
    G genotype;
    double fitness = 0.0;

    friend bool operator==(const EvaluatedIndividual&, const EvaluatedIndividual&) = default;
};

/// Evaluates `g` and rejects NaN/infinite results.
template <Codec C>
double checked_fitness(const C& codec, const typename C::genotype_type& g) {
    const double f = static_cast<double>(codec.fitness(g));
    if (!std::isfinite(f)) throw EvaluationError("fitness is not finite");
    return f;
}

/// Mixes a value into a running hash (boost::hash_combine constant).
inline void hash_combine(std::size_t& seed, std::size_t value) noexcept {
    seed ^= value + 0x9E3779B97F4A7C15ull + (seed << 6) + (seed >> 2);
}

} // namespace cvoa
