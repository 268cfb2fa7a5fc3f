#pragma once

#include "spyfall/agents.hpp"
#include "spyfall/game_core.hpp"
#include "spyfall/gamelog.hpp"
#include "spyfall/response_parser.hpp"
#include "spyfall/scripts.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace spyfall {

struct GameDriverConfig {
    GameConfig game;
    std::map<PlayerId, AgentBinding> bindings; // one per player 1..player_count
    RetryPolicy retry;
    std::string gamecode;
    // UTC microseconds; defaults to the system clock. Injected for replay.
    std::function<std::int64_t()> clock_micros;
    // Observer for every issued prompt (player, request kind, prompt text).
    std::function<void(PlayerId, RequestKind, const std::string&)> prompt_observer;
    // Classifier for question-phase responses; defaults to no boilerplate
    // patterns, which is enough for replay and well-formed sources.
    std::shared_ptr<const QuestionParser> question_parser;
};

struct RunAudit {
    int question_requests = 0;
    int answer_requests = 0;
    int accusation_requests = 0;
    int hang_requests = 0;
    int reveal_requests = 0;
    int final_vote_requests = 0;
    int total_attempts = 0; // respond() calls, including taxonomy retries
    int substituted_noops = 0;
    std::vector<AuditEntry> attempts; // every raw attempt, in request order

    int total_requests() const {
        return question_requests + answer_requests + accusation_requests + hang_requests +
               reveal_requests + final_vote_requests;
    }
};

struct RunResult {
    GameLog log;
    RunAudit audit;
    std::optional<GameOutcome> outcome; // absent when aborted
};

// Drives one game end to end: prompts per phase, retry loop, state machine
// events, archival log. Strictly sequential within a game.
class GameDriver {
public:
    GameDriver(const ScriptSet& scripts, GameDriverConfig cfg);

    RunResult run();

    // One accusation poll over all players; exposed for tests. Players with
    // a spent right are still polled, and any name they return is discarded
    // through the retry loop like an unparseable response.
    std::map<PlayerId, std::optional<PlayerId>> poll_accusations();

    const GameState& state() const { return state_; }

private:
    ResponseSource& source_for(PlayerId player);
    std::string prompt_for(PlayerId player, RequestKind kind, const RequestContext& ctx);
    void record_audit(RequestKind kind, const std::vector<AuditEntry>& attempts,
                      bool substituted);

    void step_question();
    void step_answer();
    void step_accusation_poll();
    void step_hang_vote();
    void step_reveal();
    void step_final_votes();

    GameLog build_log(std::int64_t start_us, std::int64_t end_us, bool aborted) const;

    const ScriptSet& scripts_;
    GameDriverConfig cfg_;
    GameState state_;
    RunAudit audit_;
    std::string final_vote_narration_; // statements shown to later voters
};

RunResult run_game(const ScriptSet& scripts, GameDriverConfig cfg);

// Replay bindings for an archived game: every response each player gave, in
// request order, plus a clock that replays the archived timestamps. Driving
// run_game with this config must reproduce the archived record exactly.
GameDriverConfig build_replay_config(const GameLog& log);

} // namespace spyfall
