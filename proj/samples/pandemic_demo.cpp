// Several strains sharing one population on a 20-bit space.

#include <cstdint>
#include <cstdlib>
#include <iostream>

#include <cvoa/cvoa.hpp>

int main(int argc, char** argv) {
    const int strains = argc > 1 ? std::atoi(argv[1]) : 4;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;

    cvoa::EpidemicParameters params;
    params.seed = seed;
    auto config = cvoa::MultiStrainConfig::uniform(params, strains, cvoa::PzStrategy::MaxHammingSpread);
    config.target_fitness = 0.0;

    const cvoa::binary::BinaryCodec codec(20, 15);
    const auto result = cvoa::run_pandemic(config, codec);

    for (std::size_t i = 0; i < result.strains.size(); ++i) {
        const auto& s = result.strains[i];
        std::cout << "strain " << i << ": pz " << s.patient_zero.genotype.to_string() << "  best f=" << s.best.fitness
                  << "  iterations " << s.history.size() << "  " << to_string(s.termination) << "\n";
    }
    std::cout << "global best " << result.best.genotype.to_string() << " f=" << result.best.fitness << " (strain "
              << result.best_strain << ", " << result.evaluations_total << " distinct evaluations)\n";
}
