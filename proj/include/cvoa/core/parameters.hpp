#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cvoa {

enum class Objective { Minimize, Maximize };

constexpr std::string_view to_string(Objective o) noexcept {
    return o == Objective::Minimize ? "minimize" : "maximize";
}

/// True when `candidate` is strictly better than `incumbent` under `objective`.
constexpr bool improves(double candidate, double incumbent, Objective objective) noexcept {
    return objective == Objective::Minimize ? candidate < incumbent : candidate > incumbent;
}

/// Inclusive integer interval for the number of new infections per spreader.
struct SpreadRange {
    int low = 0;
    int high = 0;

    friend constexpr bool operator==(const SpreadRange&, const SpreadRange&) = default;
};

/// Rates and probabilities driving one strain. Defaults are the values
/// suggested for the coronavirus model.
struct EpidemicParameters {
    double p_die = 0.05;
    double p_superspreader = 0.1;
    SpreadRange ordinary_spread_range{0, 5};
    SpreadRange superspreader_spread_range{6, 15};
    double p_reinfection = 0.14;
    double p_isolation = 0.5;
    double p_travel = 0.1;
    int pandemic_duration = 30;
    int strains = 1;
    /// Codec-interpreted travel distance; negative means "random distance".
    int traveler_rate = 3;
    Objective objective = Objective::Minimize;
    std::uint64_t seed = 0;

    friend bool operator==(const EpidemicParameters&, const EpidemicParameters&) = default;
};

/// Thrown by validate_parameters; carries every violation found.
class InvalidParameters : public std::invalid_argument {
public:
    explicit InvalidParameters(std::vector<std::string> violations)
        : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// Lists every invariant violated by `params` (empty when valid).
inline std::vector<std::string> parameter_violations(const EpidemicParameters& params) {
    std::vector<std::string> out;
    auto check_probability = [&](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) out.push_back(std::string(name) + " out of [0,1]");
    };
    check_probability(params.p_die, "p_die");
    check_probability(params.p_superspreader, "p_superspreader");
    check_probability(params.p_reinfection, "p_reinfection");
    check_probability(params.p_isolation, "p_isolation");
    check_probability(params.p_travel, "p_travel");

    const auto& ord = params.ordinary_spread_range;
    const auto& sup = params.superspreader_spread_range;
    if (ord.low < 0) out.emplace_back("ordinary_spread_range.low must be >= 0");
    if (ord.low > ord.high) out.emplace_back("ordinary_spread_range is empty (low > high)");
    if (sup.low > sup.high) out.emplace_back("superspreader_spread_range is empty (low > high)");
    if (sup.low < ord.high)
        out.emplace_back("superspreader_spread_range.low must be >= ordinary_spread_range.high");
    if (params.pandemic_duration < 1) out.emplace_back("pandemic_duration must be >= 1");
    if (params.strains < 1) out.emplace_back("strains must be >= 1");
    return out;
}

/// Returns `params` unchanged when valid, throws InvalidParameters otherwise.
inline const EpidemicParameters& validate_parameters(const EpidemicParameters& params) {
    if (auto v = parameter_violations(params); !v.empty()) throw InvalidParameters(std::move(v));
    return params;
}

} // namespace cvoa
