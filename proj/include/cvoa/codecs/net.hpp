#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <compare>
#include <cstdlib>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <cvoa/core/codec.hpp>
#include <cvoa/core/random.hpp>

namespace cvoa::net {

inline constexpr int lr_max = 5;
inline constexpr int drop_max = 8;
inline constexpr int layers_min = 2;
inline constexpr int layers_max = 11;
inline constexpr int unit_code_max = 11;

inline constexpr std::array<double, 6> learning_rates{0.0, 0.1, 0.01, 0.001, 0.0001, 0.00001};
inline constexpr std::array<double, 9> dropouts{0.0, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45};

/// Variable-length neural-architecture individual: {LR, DROP, L}{LAYER 1..L}.
///
/// The layer count is the size of `layers`, so the two can never disagree.
class NetGenotype {
public:
    NetGenotype() : NetGenotype(0, 0, std::vector<int>(layers_min, 0)) {}

    /// Throws std::invalid_argument when any code is out of range.
    NetGenotype(int lr_code, int drop_code, std::vector<int> layer_codes)
        : lr_(lr_code), drop_(drop_code), layers_(std::move(layer_codes)) {
        if (lr_ < 0 || lr_ > lr_max) throw std::invalid_argument("lr_code out of [0,5]");
        if (drop_ < 0 || drop_ > drop_max) throw std::invalid_argument("drop_code out of [0,8]");
        if (layer_count() < layers_min || layer_count() > layers_max)
            throw std::invalid_argument("layer count out of (1,11]");
        for (int c : layers_)
            if (c < 0 || c > unit_code_max) throw std::invalid_argument("layer code out of [0,11]");
    }

    int lr_code() const noexcept { return lr_; }
    int drop_code() const noexcept { return drop_; }
    int layer_count() const noexcept { return static_cast<int>(layers_.size()); }
    const std::vector<int>& layer_codes() const noexcept { return layers_; }

    /// Number of elements eligible for position mutation: LR, DROP and every layer.
    int mutable_positions() const noexcept { return 2 + layer_count(); }

    /// Text form `{lr,drop,L}{u1,...,uL}`.
    std::string to_string() const {
        std::string s = "{" + std::to_string(lr_) + "," + std::to_string(drop_) + "," +
                        std::to_string(layer_count()) + "}{";
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(layers_[i]);
        }
        return s + "}";
    }

    static NetGenotype parse(std::string_view text);

    friend auto operator<=>(const NetGenotype&, const NetGenotype&) = default;
    friend bool operator==(const NetGenotype&, const NetGenotype&) = default;

private:
    friend NetGenotype with_layers(const NetGenotype&, std::vector<int>);
    friend NetGenotype with_position(const NetGenotype&, int, int);

    int lr_;
    int drop_;
    std::vector<int> layers_;
};

namespace detail {

inline std::vector<int> parse_int_group(std::string_view& text) {
    auto fail = [] { throw std::invalid_argument("malformed net genotype text"); };
    if (text.empty() || text.front() != '{') fail();
    const auto close = text.find('}');
    if (close == std::string_view::npos) fail();
    std::string_view body = text.substr(1, close - 1);
    text.remove_prefix(close + 1);

    std::vector<int> out;
    while (true) {
        while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        int v = 0;
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc{}) fail();
        out.push_back(v);
        body.remove_prefix(static_cast<std::size_t>(ptr - body.data()));
        while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        if (body.empty()) break;
        if (body.front() != ',') fail();
        body.remove_prefix(1);
    }
    return out;
}

} // namespace detail

inline NetGenotype NetGenotype::parse(std::string_view text) {
    auto head = detail::parse_int_group(text);
    auto layers = detail::parse_int_group(text);
    if (!text.empty() || head.size() != 3) throw std::invalid_argument("malformed net genotype text");
    if (head[2] != static_cast<int>(layers.size()))
        throw std::invalid_argument("layer count does not match the number of layer codes");
    return {head[0], head[1], std::move(layers)};
}

inline NetGenotype with_layers(const NetGenotype& g, std::vector<int> layers) {
    return {g.lr_, g.drop_, std::move(layers)};
}

/// Replaces one mutable position (0 = LR, 1 = DROP, 2 + i = LAYER i+1).
inline NetGenotype with_position(const NetGenotype& g, int position, int value) {
    NetGenotype out = g;
    if (position == 0) out.lr_ = value;
    else if (position == 1) out.drop_ = value;
    else out.layers_.at(static_cast<std::size_t>(position - 2)) = value;
    return NetGenotype(out.lr_, out.drop_, std::move(out.layers_));
}

/// Inclusive code range of a mutable position.
constexpr std::pair<int, int> position_range(int position) noexcept {
    if (position == 0) return {0, lr_max};
    if (position == 1) return {0, drop_max};
    return {0, unit_code_max};
}

inline int position_value(const NetGenotype& g, int position) {
    if (position == 0) return g.lr_code();
    if (position == 1) return g.drop_code();
    return g.layer_codes().at(static_cast<std::size_t>(position - 2));
}

/// Decoded hyperparameters.
struct ArchitectureSpec {
    double learning_rate = 0.0;
    double dropout = 0.0;
    std::vector<int> units_per_layer;

    friend bool operator==(const ArchitectureSpec&, const ArchitectureSpec&) = default;
};

inline ArchitectureSpec decode(const NetGenotype& g) {
    ArchitectureSpec spec;
    spec.learning_rate = learning_rates[static_cast<std::size_t>(g.lr_code())];
    spec.dropout = dropouts[static_cast<std::size_t>(g.drop_code())];
    spec.units_per_layer.reserve(g.layer_codes().size());
    for (int c : g.layer_codes()) spec.units_per_layer.push_back(25 * (c + 1));
    return spec;
}

/// Signed change for a single-position mutation given a uniform draw `p`.
constexpr int mutation_step(double p) noexcept {
    if (p < 0.25) return -2;
    if (p < 0.5) return -1;
    if (p < 0.75) return +1;
    return +2;
}

/// value + mutation_step(p), clamped to [low, high].
constexpr int mutate_position(int value, int low, int high, double p) noexcept {
    return std::clamp(value + mutation_step(p), low, high);
}

inline int mutate_position(int value, int low, int high, RandomSource& rng) {
    if (low > high || value < low || value > high) throw std::invalid_argument("mutate_position: value out of range");
    return mutate_position(value, low, high, rng.uniform());
}

/// Truncates or extends the layer list to `new_count` layers; new trailing
/// layers take their codes from `fresh_code`.
template <typename FreshCode>
    requires std::is_invocable_r_v<int, FreshCode&>
NetGenotype resize_layers(const NetGenotype& g, int new_count, FreshCode&& fresh_code) {
    if (new_count < layers_min || new_count > layers_max)
        throw std::invalid_argument("resize_layers: layer count out of (1,11]");
    std::vector<int> layers = g.layer_codes();
    if (new_count < g.layer_count()) {
        layers.resize(static_cast<std::size_t>(new_count));
    } else {
        while (static_cast<int>(layers.size()) < new_count) layers.push_back(fresh_code());
    }
    return with_layers(g, std::move(layers));
}

inline NetGenotype resize_layers(const NetGenotype& g, int new_count, RandomSource& rng) {
    return resize_layers(g, new_count, [&rng] { return static_cast<int>(rng.uniform_int(0, unit_code_max)); });
}

inline NetGenotype generate_net_patient_zero(RandomSource& rng) {
    const int lr = static_cast<int>(rng.uniform_int(0, lr_max));
    const int drop = static_cast<int>(rng.uniform_int(0, drop_max));
    const int count = static_cast<int>(rng.uniform_int(layers_min, layers_max));
    std::vector<int> layers(static_cast<std::size_t>(count));
    for (auto& c : layers) c = static_cast<int>(rng.uniform_int(0, unit_code_max));
    return {lr, drop, std::move(layers)};
}

/// What a replicate call did, for inspection in tests and logs.
struct ReplicationTrace {
    bool layer_count_mutated = false;
    int layer_count_before = 0;
    int layer_count_after = 0;
    std::vector<int> positions; ///< mutated positions (0 = LR, 1 = DROP, 2 + i = LAYER i+1)
};

/// Number of non-L elements a replicate call mutates.
inline int infected_element_count(DistanceMode mode, int traveler_rate, int mutable_positions, RandomSource& rng) {
    if (mode == DistanceMode::Ordinary) return 1;
    if (traveler_rate >= 0) return std::min(traveler_rate, mutable_positions);
    return static_cast<int>(rng.uniform_int(0, mutable_positions));
}

/// One infection of a net individual:
///  1. with probability 1/3 the layer count takes a single-position
///     mutation over [2, 11] and the layer list is resized;
///  2. the number m of elements to infect is 1 for ordinary moves, the
///     traveler rate for travelers, or uniform in [0, 2 + L] when the
///     traveler rate is negative;
///  3. m distinct positions among LR, DROP and the layers are drawn;
///  4. each takes a single-position mutation.
inline NetGenotype replicate_net(const NetGenotype& parent, DistanceMode mode, int traveler_rate, RandomSource& rng,
                                 ReplicationTrace* trace = nullptr) {
    NetGenotype child = parent;
    ReplicationTrace local;
    local.layer_count_before = parent.layer_count();

    if (rng.uniform() < 1.0 / 3.0) {
        local.layer_count_mutated = true;
        const int count = mutate_position(parent.layer_count(), layers_min, layers_max, rng);
        child = resize_layers(child, count, rng);
    }
    local.layer_count_after = child.layer_count();

    const int slots = child.mutable_positions();
    const int m = infected_element_count(mode, traveler_rate, slots, rng);
    std::vector<int> order(static_cast<std::size_t>(slots));
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < m; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.index(static_cast<std::size_t>(slots - i));
        std::swap(order[static_cast<std::size_t>(i)], order[j]);
    }
    for (int i = 0; i < m; ++i) {
        const int pos = order[static_cast<std::size_t>(i)];
        const auto [low, high] = position_range(pos);
        child = with_position(child, pos, mutate_position(position_value(child, pos), low, high, rng));
        local.positions.push_back(pos);
    }
    if (trace) *trace = std::move(local);
    return child;
}

/// Weighted mismatch distance to a target architecture; 0 iff equal.
/// Layer codes are compared from the front; each missing position costs 12.
inline double surrogate_fitness(const NetGenotype& g, const NetGenotype& target) {
    constexpr int missing_cost = 12;
    int d = std::abs(g.lr_code() - target.lr_code()) + std::abs(g.drop_code() - target.drop_code()) +
            2 * std::abs(g.layer_count() - target.layer_count());
    const auto& a = g.layer_codes();
    const auto& b = target.layer_codes();
    const std::size_t common = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < common; ++i) d += std::abs(a[i] - b[i]);
    d += missing_cost * static_cast<int>(std::max(a.size(), b.size()) - common);
    return d;
}

/// Element-wise mismatch count after aligning layers from the front.
inline std::size_t mismatch_distance(const NetGenotype& a, const NetGenotype& b) {
    std::size_t d = (a.lr_code() != b.lr_code()) + (a.drop_code() != b.drop_code()) +
                    (a.layer_count() != b.layer_count());
    const auto& la = a.layer_codes();
    const auto& lb = b.layer_codes();
    for (std::size_t i = 0; i < std::max(la.size(), lb.size()); ++i)
        d += i >= la.size() || i >= lb.size() || la[i] != lb[i];
    return d;
}

/// Number of distinct net genotypes: sum over L of 6 * 9 * 12^L.
inline double net_search_space_size() {
    double total = 0.0;
    double layer_combos = 1.0;
    for (int l = 1; l <= layers_max; ++l) {
        layer_combos *= unit_code_max + 1;
        if (l >= layers_min) total += (lr_max + 1) * (drop_max + 1) * layer_combos;
    }
    return total;
}

/// Surrogate objective: distance to a fixed target genotype.
struct SurrogateObjective {
    NetGenotype target;
    double operator()(const NetGenotype& g) const { return surrogate_fitness(g, target); }
};

/// Net codification parameterized by its objective (`double(const NetGenotype&)`).
template <typename Objective>
class NetCodec {
public:
    using genotype_type = NetGenotype;

    explicit NetCodec(Objective objective) : objective_(std::move(objective)) {}

    NetGenotype generate_patient_zero(RandomSource& rng) const { return generate_net_patient_zero(rng); }

    NetGenotype replicate(const NetGenotype& parent, DistanceMode mode, int traveler_rate, RandomSource& rng) const {
        return replicate_net(parent, mode, traveler_rate, rng);
    }

    double fitness(const NetGenotype& g) const { return objective_(g); }

    std::size_t distance(const NetGenotype& a, const NetGenotype& b) const { return mismatch_distance(a, b); }
    double search_space_size() const { return net_search_space_size(); }

    const Objective& objective() const noexcept { return objective_; }

private:
    Objective objective_;
};

} // namespace cvoa::net

template <>
struct std::hash<cvoa::net::NetGenotype> {
    std::size_t operator()(const cvoa::net::NetGenotype& g) const noexcept {
        std::size_t h = static_cast<std::size_t>(cvoa::splitmix64(
            static_cast<std::uint64_t>(g.lr_code()) * 16 + static_cast<std::uint64_t>(g.drop_code())));
        for (int c : g.layer_codes()) cvoa::hash_combine(h, static_cast<std::size_t>(c) + 1);
        return static_cast<std::size_t>(cvoa::splitmix64(h));
    }
};
