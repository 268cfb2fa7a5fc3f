#pragma once

#include "spyfall/locations.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spyfall {

// Players are numbered 1..player_count (5 in the standard game).
using PlayerId = int;

struct GameConfig {
    Location location;
    PlayerId spy = 1;
    int max_turns = 10;
    int hang_threshold = 4;
    int player_count = 5;

    void validate() const; // throws ConfigError
};

enum class GamePhase {
    AwaitQuestion,
    AwaitAnswer,
    AccusationPoll,
    HangVoting,
    RevealWindow,
    FinalVote,
    Finished,
};

const char* to_string(GamePhase phase);

enum class HangBallot { Hang, NoHang };

struct HangVoteRecord {
    PlayerId accuser = 0;
    PlayerId accused = 0;
    std::map<PlayerId, HangBallot> ballots; // everyone except the accused
    bool hanged = false;
};

// The spy's per-turn choice: pass, or end the game with a location guess.
struct RevealDecision {
    std::optional<Location> guess;

    static RevealDecision pass() { return {}; }
    static RevealDecision guess_location(Location loc) { return {std::move(loc)}; }
    bool is_guess() const { return guess.has_value(); }
};

struct TurnRecord {
    int turn_no = 0;
    PlayerId asker = 0;
    PlayerId target = 0;
    std::string question;
    std::optional<std::string> answer;
    // Poll responses for all players; nullopt = "X" (no accusation).
    std::map<PlayerId, std::optional<PlayerId>> accusations;
    bool poll_recorded = false;
    // The accusation that triggered a vote this turn, if any.
    std::optional<std::pair<PlayerId, PlayerId>> accusation; // accuser, accused
    std::optional<HangVoteRecord> hang_vote;
    std::optional<RevealDecision> reveal;
};

enum class Winner { Spy, NonSpies };

enum class OutcomeCause {
    HangedSpy,
    HangedNonSpy,
    CorrectGuess,
    WrongGuess,
    FinalVoteCorrect,
    FinalVoteWrong,
};

// The winner is a pure function of the cause.
Winner winner_for(OutcomeCause cause);
const char* to_string(OutcomeCause cause);
const char* to_string(Winner winner);

struct GameOutcome {
    Winner winner;
    OutcomeCause cause;
    // The player the terminal event centers on: the spy for guesses, the
    // accused for hangs, the majority target for final votes.
    PlayerId subject = 0;

    bool operator==(const GameOutcome&) const = default;
};

struct FinalVoteRecord {
    int round = 0;
    std::map<PlayerId, PlayerId> ballots;
    std::map<PlayerId, std::string> statements; // voters that attached one
    std::optional<PlayerId> majority;           // resolved player, if any
};

// Deterministic state machine for one game. Pure data transitions; no I/O,
// no agents, no clocks. Every mutator validates its phase precondition and
// throws ProtocolViolation on an out-of-order event.
class GameState {
public:
    explicit GameState(GameConfig config);

    const GameConfig& config() const { return config_; }
    GamePhase phase() const { return phase_; }
    int current_turn() const { return current_turn_; }
    PlayerId next_asker() const { return next_asker_; }
    const std::vector<TurnRecord>& transcript() const { return transcript_; }
    const std::vector<FinalVoteRecord>& final_votes() const { return final_votes_; }
    bool accusation_right(PlayerId player) const;
    bool finished() const { return phase_ == GamePhase::Finished; }

    // Accessor for the recorded outcome; throws NotReadyError while running.
    const GameOutcome& outcome() const;

    // Turn step 1: next_asker asks target a question.
    void apply_question(PlayerId asker, PlayerId target, std::string question);

    // Turn step 2: the target answers. The target becomes the next asker.
    void apply_answer(std::string answer);

    // Turn step 3: every player responds with a name or a pass. The first
    // accuser in player order triggers the hang vote and spends their right;
    // later accusers in the same poll keep theirs.
    void record_accusation_poll(const std::map<PlayerId, std::optional<PlayerId>>& responses);

    // Turn step 3.1: ballots from everyone except the accused.
    void tally_hang_vote(const std::map<PlayerId, HangBallot>& ballots);

    // Turn step 5: the spy passes or guesses.
    void apply_reveal(const RevealDecision& decision);

    // End-game vote, one round. Returns the resolved player on a strict
    // majority, nullopt when a revote is required. Throws
    // UnresolvedVoteError once `round` exceeds the revote cap.
    std::optional<PlayerId> tally_final_vote(const std::map<PlayerId, PlayerId>& ballots,
                                             int round,
                                             std::map<PlayerId, std::string> statements = {});

    static constexpr int kMaxFinalVoteRounds = 10;

private:
    void require_phase(GamePhase expected, const char* op) const;
    void require_player(PlayerId player, const char* what) const;
    TurnRecord& open_turn();
    void advance_after_reveal_or_pass();
    void finish(OutcomeCause cause, PlayerId subject);

    GameConfig config_;
    GamePhase phase_ = GamePhase::AwaitQuestion;
    int current_turn_ = 1;
    PlayerId next_asker_ = 1;
    std::vector<TurnRecord> transcript_;
    std::vector<FinalVoteRecord> final_votes_;
    std::map<PlayerId, bool> accusation_rights_;
    std::optional<GameOutcome> outcome_;
};

// Convenience constructor mirroring the operation vocabulary.
GameState new_game(const GameConfig& config);

} // namespace spyfall
