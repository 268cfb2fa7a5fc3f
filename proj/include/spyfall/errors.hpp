#pragma once

#include <stdexcept>
#include <string>

namespace spyfall {

// Invalid GameConfig or run configuration (bad location, role out of range, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An event was fed to the state machine out of phase, out of turn order, or
// with an illegal payload (self-target, spent accusation right, ...).
struct ProtocolViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accessor called before the game produced the requested value.
struct NotReadyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A data file is missing, truncated, or fails validation on load.
struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request template and context fields do not match.
struct TemplateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Replay queue ran dry: the canned responses do not cover the game's requests.
struct FixtureExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Network / HTTP failure talking to a remote model endpoint.
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Credentials required for a remote run are absent.
struct CredentialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Final vote failed to resolve within the revote cap.
struct UnresolvedVoteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Retry budget exhausted on a request with no substitutable no-op.
struct GameAborted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace spyfall
