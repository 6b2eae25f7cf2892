#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace cvoa {

/// SplitMix64 finalizer, used to derive independent seeds from a base seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seedable generator with platform-independent draw mappings.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions do not, so the real/integer mappings are done here. The same
/// seed and the same sequence of calls give the same values on every platform.
///
/// Single owner: never share one instance between threads.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform real in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in the inclusive range [low, high] (Lemire's method).
    std::int64_t uniform_int(std::int64_t low, std::int64_t high) {
        if (low > high) throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(high) - static_cast<std::uint64_t>(low);
        if (span == ~std::uint64_t{0}) return static_cast<std::int64_t>(engine_());
        return low + static_cast<std::int64_t>(bounded(span + 1));
    }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::invalid_argument("index: n must be positive");
        return static_cast<std::size_t>(bounded(n));
    }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::uint64_t bounded(std::uint64_t range) {
        unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = (0 - range) % range;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(engine_()) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace cvoa
