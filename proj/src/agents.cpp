#include "spyfall/agents.hpp"

#include "spyfall/errors.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <thread>

// httplib must see the OpenSSL macro before inclusion; CMake defines it.
#include <httplib.h>

namespace spyfall {

using nlohmann::json;

RemoteSource::RemoteSource(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    if (endpoint_.base_url.empty()) throw ConfigError("remote endpoint base_url is empty");
    if (endpoint_.model.empty()) throw ConfigError("remote endpoint model is empty");
}

std::string RemoteSource::request_body(const RemoteEndpoint& endpoint, const std::string& prompt) {
    json body;
    body["model"] = endpoint.model;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    if (endpoint.temperature) body["temperature"] = *endpoint.temperature;
    return body.dump();
}

std::string RemoteSource::respond(const std::string& prompt) {
    const char* key = std::getenv(endpoint_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
        throw CredentialError("environment variable " + endpoint_.api_key_env + " is not set");
    }

    httplib::Client client(endpoint_.base_url);
    client.set_connection_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
    client.set_bearer_token_auth(key);

    const std::string body = request_body(endpoint_, prompt);
    std::string last_error;
    int backoff_ms = endpoint_.transport_backoff_ms;

    for (int attempt = 0; attempt <= endpoint_.transport_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        auto res = client.Post(endpoint_.path, body, "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        try {
            json parsed = json::parse(res->body);
            return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception& e) {
            last_error = std::string("malformed completion response: ") + e.what();
        }
    }
    throw TransportError(last_error.empty() ? "remote request failed" : last_error);
}

ReplaySource::ReplaySource(std::vector<std::string> responses)
    : queue_(responses.begin(), responses.end()) {}

std::string ReplaySource::respond(const std::string&) {
    if (queue_.empty()) {
        throw FixtureExhausted("replay queue is empty; canned responses do not cover this game");
    }
    std::string next = std::move(queue_.front());
    queue_.pop_front();
    return next;
}

BaselineSource::BaselineSource(BaselinePolicy policy, PlayerId self, int player_count,
                               std::uint64_t seed)
    : policy_(policy), self_(self), player_count_(player_count), rng_(seed) {}

std::string BaselineSource::respond(const std::string&) {
    if (policy_ == BaselinePolicy::AlwaysPass) return "X";
    std::uniform_int_distribution<int> dist(1, player_count_ - 1);
    int pick = dist(rng_);
    if (pick >= self_) ++pick; // skip self
    return std::to_string(pick);
}

} // namespace spyfall
