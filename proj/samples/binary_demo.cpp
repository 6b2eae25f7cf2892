// One strain on the 10-bit quadratic benchmark, printed as an iteration table.

#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include <cvoa/cvoa.hpp>

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
    const int bits = argc > 2 ? std::atoi(argv[2]) : 10;

    const cvoa::binary::BinaryCodec codec(bits, 15);
    cvoa::EpidemicParameters params;
    params.seed = seed;

    cvoa::RandomSource rng(seed);
    const auto result = cvoa::run_strain(params, codec, rng);

    std::cout << "patient zero " << result.patient_zero.genotype.to_string() << "  f=" << result.patient_zero.fitness
              << "\n\n"
              << std::setw(9) << "Iteration" << std::setw(10) << "Deaths" << std::setw(11) << "Recovered"
              << std::setw(10) << "Infected" << std::setw(14) << "Fitness" << "\n";
    for (const auto& r : result.history)
        std::cout << std::setw(9) << r.iteration << std::setw(10) << r.deaths_total << std::setw(11)
                  << r.recovered_total << std::setw(10) << r.infected_count << std::setw(14) << r.best_fitness << "\n";

    std::cout << "\nbest " << result.best.genotype.to_string() << " = " << cvoa::binary::decode(result.best.genotype)
              << "  f=" << result.best.fitness << "  (" << to_string(result.termination) << ", "
              << result.evaluations_total << " evaluations)\n";
}
