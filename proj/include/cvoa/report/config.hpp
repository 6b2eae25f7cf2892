#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include <cvoa/codecs/binary.hpp>
#include <cvoa/codecs/net.hpp>
#include <cvoa/core/parameters.hpp>
#include <cvoa/engine/multi_strain.hpp>

namespace cvoa::report {

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BinaryCodecConfig {
    int bits = 10;
    std::uint64_t target = 15;
};

/// Net codec: either a surrogate target (fixed, or drawn from `target_seed`)
/// or an external evaluator command.
struct NetCodecConfig {
    std::optional<net::NetGenotype> surrogate_target;
    std::optional<std::uint64_t> target_seed;
    std::optional<std::string> evaluator_command;

    bool uses_surrogate() const noexcept { return !evaluator_command.has_value(); }
};

using CodecConfig = std::variant<BinaryCodecConfig, NetCodecConfig>;

struct RunConfig {
    CodecConfig codec = BinaryCodecConfig{};
    EpidemicParameters parameters;
    PzStrategy pz_strategy = PzStrategy::Random;
    int repeat = 1;
    std::string output_dir = "cvoa-out";
    /// Stop each run once the known optimum is reached.
    bool stop_on_optimum = false;
    std::size_t evaluation_threads = 1;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

inline SpreadRange parse_range(const nlohmann::json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ConfigError(name + " must be a two-element integer array [low, high]");
    return {j[0].get<int>(), j[1].get<int>()};
}

inline PzStrategy parse_pz_strategy(const std::string& s) {
    if (s == "random") return PzStrategy::Random;
    if (s == "max_hamming_spread") return PzStrategy::MaxHammingSpread;
    throw ConfigError("pz_strategy must be 'random' or 'max_hamming_spread'");
}

inline EpidemicParameters parse_parameters(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("parameters must be an object");
    reject_unknown(j,
                   {"p_die", "p_superspreader", "ordinary_spread_range", "superspreader_spread_range",
                    "p_reinfection", "p_isolation", "p_travel", "pandemic_duration", "strains", "traveler_rate",
                    "objective", "seed"},
                   "parameters");
    EpidemicParameters p;
    p.p_die = j.value("p_die", p.p_die);
    p.p_superspreader = j.value("p_superspreader", p.p_superspreader);
    if (j.contains("ordinary_spread_range"))
        p.ordinary_spread_range = parse_range(j["ordinary_spread_range"], "ordinary_spread_range");
    if (j.contains("superspreader_spread_range"))
        p.superspreader_spread_range = parse_range(j["superspreader_spread_range"], "superspreader_spread_range");
    p.p_reinfection = j.value("p_reinfection", p.p_reinfection);
    p.p_isolation = j.value("p_isolation", p.p_isolation);
    p.p_travel = j.value("p_travel", p.p_travel);
    p.pandemic_duration = j.value("pandemic_duration", p.pandemic_duration);
    p.strains = j.value("strains", p.strains);
    p.traveler_rate = j.value("traveler_rate", p.traveler_rate);
    p.seed = j.value("seed", p.seed);
    if (j.contains("objective")) {
        const auto o = j["objective"].get<std::string>();
        if (o == "minimize") p.objective = Objective::Minimize;
        else if (o == "maximize") p.objective = Objective::Maximize;
        else throw ConfigError("objective must be 'minimize' or 'maximize'");
    }
    return p;
}

inline CodecConfig parse_codec(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1)
        throw ConfigError("codec must name exactly one codification: {\"binary\": {...}} or {\"nn\": {...}}");
    const auto& [name, body] = *j.items().begin();
    if (!body.is_object()) throw ConfigError("codec." + name + " must be an object");
    if (name == "binary") {
        reject_unknown(body, {"bits", "target"}, "codec.binary");
        BinaryCodecConfig c;
        c.bits = body.value("bits", c.bits);
        c.target = body.value("target", c.target);
        if (c.bits < binary::min_bits || c.bits > binary::max_bits)
            throw ConfigError("codec.binary.bits must be in [8, 64]");
        return c;
    }
    if (name == "nn") {
        reject_unknown(body, {"surrogate_target", "target_seed", "evaluator"}, "codec.nn");
        NetCodecConfig c;
        const bool surrogate = body.contains("surrogate_target");
        const bool external = body.contains("evaluator");
        if (surrogate == external) throw ConfigError("codec.nn needs exactly one of 'surrogate_target' or 'evaluator'");
        if (external) {
            c.evaluator_command = body["evaluator"].get<std::string>();
            if (c.evaluator_command->empty()) throw ConfigError("codec.nn.evaluator must not be empty");
        } else {
            const auto t = body["surrogate_target"].get<std::string>();
            if (t == "random") {
                c.target_seed = body.value("target_seed", std::uint64_t{0});
            } else {
                try {
                    c.surrogate_target = net::NetGenotype::parse(t);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("codec.nn.surrogate_target: ") + e.what());
                }
            }
        }
        return c;
    }
    throw ConfigError("unknown codec '" + name + "'");
}

} // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    detail::reject_unknown(j,
                           {"codec", "parameters", "strains", "pz_strategy", "repeat", "output_dir",
                            "stop_on_optimum", "evaluation_threads"},
                           "configuration");
    RunConfig c;
    try {
        if (!j.contains("codec")) throw ConfigError("missing 'codec'");
        c.codec = detail::parse_codec(j["codec"]);
        if (j.contains("parameters")) c.parameters = detail::parse_parameters(j["parameters"]);
        if (j.contains("strains")) c.parameters.strains = j["strains"].get<int>();
        if (j.contains("pz_strategy")) c.pz_strategy = detail::parse_pz_strategy(j["pz_strategy"].get<std::string>());
        c.repeat = j.value("repeat", c.repeat);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.stop_on_optimum = j.value("stop_on_optimum", c.stop_on_optimum);
        c.evaluation_threads = j.value("evaluation_threads", c.evaluation_threads);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("configuration type error: ") + e.what());
    }
    if (c.repeat < 1) throw ConfigError("repeat must be >= 1");
    if (c.evaluation_threads < 1) throw ConfigError("evaluation_threads must be >= 1");
    if (auto v = parameter_violations(c.parameters); !v.empty()) throw ConfigError(InvalidParameters(v).what());
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file " + path.string());
    const auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
    if (j.is_discarded()) throw ConfigError("configuration file " + path.string() + " is not valid JSON");
    return parse_config(j);
}

} // namespace cvoa::report
