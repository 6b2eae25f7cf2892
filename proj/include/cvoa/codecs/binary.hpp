#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <cvoa/core/codec.hpp>
#include <cvoa/core/random.hpp>

namespace cvoa::binary {

inline constexpr int min_bits = 8;
inline constexpr int max_bits = 64;

/// Fixed-length bit string, most significant bit first.
class BitGenotype {
public:
    BitGenotype() = default;

    /// Throws std::invalid_argument for unsupported lengths or values that
    /// do not fit in `length` bits.
    BitGenotype(std::uint64_t value, int length) : value_(value), length_(length) {
        if (length < min_bits || length > max_bits)
            throw std::invalid_argument("bit length must be in [" + std::to_string(min_bits) + ", " +
                                        std::to_string(max_bits) + "]");
        if (length < 64 && (value >> length) != 0) throw std::invalid_argument("value does not fit in bit length");
    }

    /// Parses a string of '0'/'1' characters.
    static BitGenotype parse(std::string_view bits) {
        if (bits.size() > static_cast<std::size_t>(max_bits)) throw std::invalid_argument("bit string too long");
        std::uint64_t v = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') throw std::invalid_argument("bit string may only contain '0' and '1'");
            v = (v << 1) | static_cast<std::uint64_t>(c - '0');
        }
        return {v, static_cast<int>(bits.size())};
    }

    std::uint64_t value() const noexcept { return value_; }
    int length() const noexcept { return length_; }

    /// Bit `i` counted from the left (i = 0 is the most significant bit).
    bool bit(int i) const noexcept { return ((value_ >> (length_ - 1 - i)) & 1u) != 0; }

    BitGenotype flipped(int i) const noexcept {
        BitGenotype out = *this;
        out.value_ ^= std::uint64_t{1} << (length_ - 1 - i);
        return out;
    }

    std::string to_string() const {
        std::string s(static_cast<std::size_t>(length_), '0');
        for (int i = 0; i < length_; ++i)
            if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    friend auto operator<=>(const BitGenotype&, const BitGenotype&) = default;
    friend bool operator==(const BitGenotype&, const BitGenotype&) = default;

private:
    std::uint64_t value_ = 0;
    int length_ = min_bits;
};

/// Big-endian positional value.
inline std::uint64_t decode(const BitGenotype& g) noexcept { return g.value(); }

/// (decode(g) - target)^2, computed in 128-bit integers before rounding to double.
inline double quadratic_fitness(const BitGenotype& g, std::uint64_t target) noexcept {
    const __int128 diff = static_cast<__int128>(decode(g)) - static_cast<__int128>(target);
    const auto magnitude = static_cast<unsigned __int128>(diff < 0 ? -diff : diff);
    return static_cast<double>(magnitude * magnitude);
}

inline int hamming_distance(const BitGenotype& a, const BitGenotype& b) noexcept {
    return std::popcount(a.value() ^ b.value());
}

/// Number of bits a traveler flips: max(2, ceil(n / 10)).
constexpr int traveler_flips(int length) noexcept { return std::max(2, (length + 9) / 10); }

inline BitGenotype random_patient_zero(int length, RandomSource& rng) {
    if (length < min_bits || length > max_bits)
        throw std::invalid_argument("unsupported bit length " + std::to_string(length));
    std::uint64_t v = rng.next_u64();
    if (length < 64) v &= (std::uint64_t{1} << length) - 1;
    return {v, length};
}

/// Ordinary: one uniformly chosen bit flipped. Traveler: traveler_flips(n)
/// distinct uniformly chosen bits flipped.
inline BitGenotype replicate_bits(const BitGenotype& parent, DistanceMode mode, RandomSource& rng) {
    const int n = parent.length();
    if (mode == DistanceMode::Ordinary) return parent.flipped(static_cast<int>(rng.index(static_cast<std::size_t>(n))));

    const int k = std::min(n, traveler_flips(n));
    std::uint64_t chosen = 0;
    BitGenotype child = parent;
    for (int flipped = 0; flipped < k;) {
        const int i = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
        if (chosen & (std::uint64_t{1} << i)) continue;
        chosen |= std::uint64_t{1} << i;
        child = child.flipped(i);
        ++flipped;
    }
    return child;
}

/// Bit-string codification scored by the quadratic benchmark.
class BinaryCodec {
public:
    using genotype_type = BitGenotype;

    explicit BinaryCodec(int bits = 10, std::uint64_t target = 15) : bits_(bits), target_(target) {
        if (bits < min_bits || bits > max_bits)
            throw std::invalid_argument("unsupported bit length " + std::to_string(bits));
    }

    int bits() const noexcept { return bits_; }
    std::uint64_t target() const noexcept { return target_; }

    BitGenotype generate_patient_zero(RandomSource& rng) const { return random_patient_zero(bits_, rng); }

    /// The travel distance is fixed by the bit length; `traveler_rate` is unused.
    BitGenotype replicate(const BitGenotype& parent, DistanceMode mode, int /*traveler_rate*/,
                          RandomSource& rng) const {
        return replicate_bits(parent, mode, rng);
    }

    double fitness(const BitGenotype& g) const noexcept { return quadratic_fitness(g, target_); }

    std::size_t distance(const BitGenotype& a, const BitGenotype& b) const noexcept {
        return static_cast<std::size_t>(hamming_distance(a, b));
    }

    double search_space_size() const noexcept { return std::ldexp(1.0, bits_); }

    /// Minimum of the quadratic objective.
    static constexpr double optimum = 0.0;

private:
    int bits_;
    std::uint64_t target_;
};

} // namespace cvoa::binary

template <>
struct std::hash<cvoa::binary::BitGenotype> {
    std::size_t operator()(const cvoa::binary::BitGenotype& g) const noexcept {
        return static_cast<std::size_t>(cvoa::splitmix64(g.value() ^ (static_cast<std::uint64_t>(g.length()) << 58)));
    }
};
