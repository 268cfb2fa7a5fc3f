#pragma once

#include "spyfall/errors.hpp"
#include "spyfall/game_core.hpp"
#include "spyfall/response_parser.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace spyfall {

// A per-player text source. Implementations must be stateless across
// requests apart from replay-queue consumption: every prompt is
// self-contained and no conversation history is kept.
class ResponseSource {
public:
    virtual ~ResponseSource() = default;
    virtual std::string respond(const std::string& prompt) = 0;
};

struct RemoteEndpoint {
    std::string base_url;                       // e.g. https://api.openai.com
    std::string path = "/v1/chat/completions";
    std::string model;
    std::optional<double> temperature;          // endpoint default when unset
    int timeout_ms = 60000;
    int transport_retries = 2;                  // network budget, separate from taxonomy retries
    int transport_backoff_ms = 250;             // doubles per retry
    std::string api_key_env = "SPYFALL_API_KEY";
};

// Chat-completions client. Sends the whole assembled script as one user
// message, no system message, no history.
class RemoteSource : public ResponseSource {
public:
    explicit RemoteSource(RemoteEndpoint endpoint);
    std::string respond(const std::string& prompt) override; // throws TransportError/CredentialError

    // Request body for a prompt, exposed for tests.
    static std::string request_body(const RemoteEndpoint& endpoint, const std::string& prompt);

private:
    RemoteEndpoint endpoint_;
};

// Canned responses consumed in order; running dry is a fatal fixture error.
class ReplaySource : public ResponseSource {
public:
    explicit ReplaySource(std::vector<std::string> responses);
    std::string respond(const std::string& prompt) override; // throws FixtureExhausted
    size_t remaining() const { return queue_.size(); }
    void push(std::string response) { queue_.push_back(std::move(response)); }

private:
    std::deque<std::string> queue_;
};

enum class BaselinePolicy {
    UniformRandomVote, // a digit 1..player_count excluding self, uniform
    AlwaysPass,        // "X" everywhere a pass symbol exists
};

class BaselineSource : public ResponseSource {
public:
    BaselineSource(BaselinePolicy policy, PlayerId self, int player_count, std::uint64_t seed);
    std::string respond(const std::string& prompt) override;

private:
    BaselinePolicy policy_;
    PlayerId self_;
    int player_count_;
    std::mt19937_64 rng_;
};

struct AgentBinding {
    PlayerId player = 0;
    std::shared_ptr<ResponseSource> source;
};

struct RetryPolicy {
    enum class OnExhaustion { AbortGame, SubstituteNoOp };
    int max_retries = 3; // per request, beyond the first attempt
    OnExhaustion on_exhaustion = OnExhaustion::SubstituteNoOp;
};

struct AuditEntry {
    std::string raw;
    bool accepted = false;
    std::optional<ResponseTier> tier; // recorded for question-phase attempts
};

// One parse attempt: an action when the response was usable, plus the tier
// when the phase has a taxonomy.
template <typename Action>
struct ParseAttempt {
    std::optional<Action> action;
    std::optional<ResponseTier> tier;
};

template <typename Action>
struct RequestResult {
    Action action{};
    std::vector<AuditEntry> attempts;
    bool substituted_noop = false;
};

// Issues the same prompt until the parser accepts a response or the retry
// budget runs out; then either substitutes the phase's no-op or aborts.
// Every attempt lands in the audit trail.
template <typename Action>
RequestResult<Action> request_action(ResponseSource& source, const std::string& prompt,
                                     const std::function<ParseAttempt<Action>(const std::string&)>& parse,
                                     const RetryPolicy& policy,
                                     std::optional<Action> noop = std::nullopt) {
    RequestResult<Action> result;
    const int attempts_allowed = 1 + std::max(0, policy.max_retries);
    for (int attempt = 0; attempt < attempts_allowed; ++attempt) {
        std::string raw = source.respond(prompt);
        ParseAttempt<Action> parsed = parse(raw);
        AuditEntry entry{std::move(raw), parsed.action.has_value(), parsed.tier};
        result.attempts.push_back(std::move(entry));
        if (parsed.action) {
            result.action = std::move(*parsed.action);
            return result;
        }
    }
    if (policy.on_exhaustion == RetryPolicy::OnExhaustion::SubstituteNoOp && noop) {
        result.action = std::move(*noop);
        result.substituted_noop = true;
        return result;
    }
    throw GameAborted("retry budget exhausted after " + std::to_string(attempts_allowed) +
                      " attempts");
}

} // namespace spyfall
