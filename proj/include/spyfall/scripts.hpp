#pragma once

#include "spyfall/game_core.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

namespace spyfall {

// The six request forms a player can receive.
enum class RequestKind {
    AskQuestion,
    AnswerQuestion,
    AccusationPoll,
    HangVote,
    RevealWindow,
    FinalVote,
};

const char* to_string(RequestKind kind);
const char* request_file_stem(RequestKind kind);

// The rule, strategy, and request texts, loaded byte-for-byte from the data
// files. The shipped texts intentionally keep their original typos; tests
// pin the checksums so nobody "fixes" them and silently breaks replay.
struct ScriptSet {
    std::string rule_text;
    std::string strategy_text;
    std::map<RequestKind, std::string> request_templates;
    std::map<std::string, std::uint64_t> checksums; // relative file id -> FNV-1a 64
};

// Loads rule.txt, strategy.txt, and requests/<kind>.txt from `dir`.
// Throws LoadError naming the offending file if anything is missing.
ScriptSet load_scripts(const std::filesystem::path& dir);

struct RolePreamble {
    PlayerId player = 1;
    bool is_spy = false;
    std::optional<Location> location; // present exactly when not the spy

    void validate() const; // throws ConfigError
};

std::string render_preamble(const RolePreamble& preamble);

// Renders the cumulative progress narration: one block per completed turn,
// reproducing the archived log punctuation exactly (ordinal "Nth" for every
// N, no space after "following."). A trailing turn without an answer renders
// nothing. Terminal sentences are appended by the caller, not here.
std::string render_progress(std::span<const TurnRecord> transcript);

// Context fields for render_request; which ones are required depends on the
// request kind.
struct RequestContext {
    std::optional<int> turn_no;
    std::optional<PlayerId> asker;
    std::optional<PlayerId> accuser;
    std::optional<PlayerId> accused;
    std::optional<std::string> question;
};

std::string render_request(const ScriptSet& scripts, RequestKind kind,
                           const RequestContext& context);

// rule + strategy + preamble + progress + request, one blank line between
// parts; an empty progress contributes nothing.
std::string assemble_prompt(const ScriptSet& scripts, const std::string& preamble,
                            const std::string& progress, const std::string& request);

// Terminal narration sentence appended to the archived log after the last
// turn block. The correct-guess wording is taken verbatim from the archived
// games; the other causes follow the same pattern.
std::string terminal_sentence(const GameOutcome& outcome);

// Narration for final-vote rounds, shown to later voters within a round and
// never stored in the archived log.
std::string final_vote_statement_sentence(PlayerId voter, PlayerId vote,
                                          const std::string& statement);
std::string revote_sentence();

} // namespace spyfall
