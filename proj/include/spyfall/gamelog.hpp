#pragma once

#include "spyfall/game_core.hpp"
#include "spyfall/scripts.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spyfall {

struct VoteRecord {
    int turn = 0;
    PlayerId accuser = 0;
    PlayerId accused = 0;
    std::map<PlayerId, HangBallot> ballots;
    bool hanged = false;

    bool operator==(const VoteRecord&) const = default;
};

struct FinalVoteLogEntry {
    int round = 0;
    std::map<PlayerId, PlayerId> ballots;
    std::map<PlayerId, std::string> statements;

    bool operator==(const FinalVoteLogEntry&) const = default;
};

// Archival record of one game. Field names and shapes mirror the released
// game logs; `final_votelog`, `reveal_guess`, and `aborted` are extensions
// this engine adds (omitted from serialized output when empty/false).
struct GameLog {
    std::string gamecode;
    PlayerId spy = 0;
    Location location;
    bool spywin = false;
    std::int64_t game_start_us = 0;
    std::int64_t game_end_us = 0;
    std::string narration; // the 'gamelog' field
    std::vector<VoteRecord> votelog;
    int total_turn = 0;
    std::vector<std::pair<PlayerId, std::string>> questions; // (target, text)
    std::vector<std::string> answers;
    std::map<int, std::map<PlayerId, std::string>> accuselog; // turn -> player -> "X" or digit
    std::vector<FinalVoteLogEntry> final_votelog; // extension: end-game vote rounds
    std::optional<std::string> reveal_guess;      // extension: the spy's wrong guess
    bool aborted = false;                         // extension: retry budget ran out

    bool operator==(const GameLog&) const = default;
};

// Structural invariant check; throws LoadError describing the violation.
void validate(const GameLog& log);

// Canonical JSON document with fixed key order; refuses invalid logs.
nlohmann::ordered_json serialize(const GameLog& log);
std::string serialize_text(const GameLog& log);

// Accepts both ISO-8601 and the legacy "datetime.datetime(...)" timestamp
// forms; re-validates invariants. Throws LoadError naming the field.
GameLog deserialize(const nlohmann::json& doc);
GameLog load_gamelog(const std::filesystem::path& path);
void save_gamelog(const GameLog& log, const std::filesystem::path& path);

// The terminal cause encoded in the archived record (votelog + narration).
OutcomeCause infer_cause(const GameLog& log);

// Rebuilds the per-turn records implied by the archived fields. The asker
// chain is player 1 first, then each turn's target.
std::vector<TurnRecord> reconstruct_turns(const GameLog& log);

// render_progress over the reconstructed turns plus the terminal sentence;
// must equal log.narration byte-for-byte for completed games.
std::string reconstruct_narration(const GameLog& log);

struct ReplayReport {
    bool all_match = false;
    std::vector<std::string> mismatches; // "field: detail", first divergence first
};

// Drives the archived game through the orchestrator with replay bindings and
// compares outcome, total_turn, narration (byte-exact), votelog, questions,
// answers, and accuselog.
ReplayReport verify_replay(const GameLog& log, const ScriptSet& scripts);

} // namespace spyfall
