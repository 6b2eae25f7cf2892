#pragma once

#include <atomic>
#include <cmath>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include <cvoa/codecs/net.hpp>
#include <cvoa/codecs/subprocess.hpp>
#include <cvoa/core/codec.hpp>

namespace cvoa::net {

/// One-line JSON request sent to an external evaluator.
inline std::string evaluator_request(const ArchitectureSpec& spec) {
    nlohmann::ordered_json j;
    j["learning_rate"] = spec.learning_rate;
    j["dropout"] = spec.dropout;
    j["units"] = spec.units_per_layer;
    return j.dump();
}

/// Parses the first line of an evaluator reply, `{"fitness": <finite number>}`.
inline double parse_evaluator_reply(std::string_view reply) {
    const auto eol = reply.find('\n');
    const std::string_view line = reply.substr(0, eol);
    const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw EvaluationError("evaluator reply is not a JSON object");
    const auto it = j.find("fitness");
    if (it == j.end() || !it->is_number()) throw EvaluationError("evaluator reply lacks a numeric \"fitness\"");
    const double f = it->get<double>();
    if (!std::isfinite(f)) throw EvaluationError("evaluator returned a non-finite fitness");
    return f;
}

/// Scores genotypes by running an external command once per distinct
/// genotype: the decoded architecture goes to its stdin as one JSON line and
/// the fitness comes back as one JSON line on stdout.
///
/// Results are memoized; concurrent requests for the same genotype share one
/// evaluator run. Failed evaluations are not cached. Copies share the cache.
class ExternalEvaluator {
public:
    explicit ExternalEvaluator(std::string command) : state_(std::make_shared<State>()) {
        state_->command = std::move(command);
    }

    double operator()(const NetGenotype& g) const {
        std::shared_future<double> result;
        std::promise<double> promise;
        bool owner = false;
        {
            std::lock_guard lock(state_->mutex);
            auto [it, inserted] = state_->cache.try_emplace(g);
            if (inserted) {
                it->second = promise.get_future().share();
                owner = true;
            }
            result = it->second;
        }
        if (owner) {
            try {
                promise.set_value(evaluate(g));
            } catch (...) {
                promise.set_exception(std::current_exception());
                std::lock_guard lock(state_->mutex);
                state_->cache.erase(g);
            }
        }
        return result.get();
    }

    const std::string& command() const noexcept { return state_->command; }

    /// Number of evaluator processes launched so far.
    std::size_t invocations() const noexcept { return state_->invocations.load(); }

private:
    double evaluate(const NetGenotype& g) const {
        state_->invocations.fetch_add(1);
        cvoa::detail::ProcessOutput out;
        try {
            out = cvoa::detail::run_shell(state_->command, evaluator_request(decode(g)) + "\n");
        } catch (const std::exception& e) {
            throw EvaluationError(std::string("evaluator failed to start: ") + e.what());
        }
        if (out.exit_status != 0)
            throw EvaluationError("evaluator exited with status " + std::to_string(out.exit_status) + " for " +
                                  g.to_string());
        return parse_evaluator_reply(out.stdout_text);
    }

    struct State {
        std::string command;
        std::mutex mutex;
        std::unordered_map<NetGenotype, std::shared_future<double>> cache;
        std::atomic<std::size_t> invocations{0};
    };

    std::shared_ptr<State> state_;
};

} // namespace cvoa::net
