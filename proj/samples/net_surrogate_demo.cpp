// Architecture search against a surrogate target, decoded at the end.

#include <cstdint>
#include <cstdlib>
#include <iostream>

#include <cvoa/cvoa.hpp>

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 3;
    const auto target = cvoa::net::NetGenotype::parse("{4,0,8}{9,7,2,7,2,7,10,7}");

    const cvoa::net::NetCodec codec(cvoa::net::SurrogateObjective{target});
    cvoa::EpidemicParameters params;
    cvoa::StrainOptions<cvoa::net::NetGenotype> options;
    options.target_fitness = 0.0;

    cvoa::RandomSource rng(seed);
    const auto result = cvoa::run_strain(params, codec, rng, options);

    std::cout << "target " << target.to_string() << "\n";
    for (const auto& r : result.history)
        std::cout << "iteration " << r.iteration << ": best distance " << r.best_fitness << " (" << r.infected_count
                  << " infected)\n";

    const auto spec = cvoa::net::decode(result.best.genotype);
    std::cout << "best " << result.best.genotype.to_string() << "\n  learning rate " << spec.learning_rate
              << "\n  dropout " << spec.dropout << "\n  units";
    for (int u : spec.units_per_layer) std::cout << ' ' << u;
    std::cout << "\n";
}
