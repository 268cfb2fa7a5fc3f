#include "spyfall/orchestrator.hpp"

#include "spyfall/errors.hpp"

#include <chrono>

namespace spyfall {

namespace {

std::int64_t system_clock_micros() {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

} // namespace

GameDriver::GameDriver(const ScriptSet& scripts, GameDriverConfig cfg)
    : scripts_(scripts), cfg_(std::move(cfg)), state_(cfg_.game) {
    if (cfg_.gamecode.empty()) throw ConfigError("gamecode is empty");
    for (PlayerId p = 1; p <= cfg_.game.player_count; ++p) {
        auto it = cfg_.bindings.find(p);
        if (it == cfg_.bindings.end() || !it->second.source) {
            throw ConfigError("no agent binding for player " + std::to_string(p));
        }
    }
    if (!cfg_.clock_micros) cfg_.clock_micros = system_clock_micros;
    if (!cfg_.question_parser) {
        cfg_.question_parser = std::make_shared<QuestionParser>(BoilerplatePatterns{});
    }
}

ResponseSource& GameDriver::source_for(PlayerId player) {
    return *cfg_.bindings.at(player).source;
}

std::string GameDriver::prompt_for(PlayerId player, RequestKind kind,
                                   const RequestContext& ctx) {
    RolePreamble preamble;
    preamble.player = player;
    preamble.is_spy = (player == cfg_.game.spy);
    if (!preamble.is_spy) preamble.location = cfg_.game.location;

    std::string progress = render_progress(state_.transcript());
    if (kind == RequestKind::FinalVote) progress += final_vote_narration_;

    std::string prompt = assemble_prompt(scripts_, render_preamble(preamble), progress,
                                         render_request(scripts_, kind, ctx));
    if (cfg_.prompt_observer) cfg_.prompt_observer(player, kind, prompt);
    return prompt;
}

void GameDriver::record_audit(RequestKind kind, const std::vector<AuditEntry>& attempts,
                              bool substituted) {
    switch (kind) {
        case RequestKind::AskQuestion:    ++audit_.question_requests; break;
        case RequestKind::AnswerQuestion: ++audit_.answer_requests; break;
        case RequestKind::AccusationPoll: ++audit_.accusation_requests; break;
        case RequestKind::HangVote:       ++audit_.hang_requests; break;
        case RequestKind::RevealWindow:   ++audit_.reveal_requests; break;
        case RequestKind::FinalVote:      ++audit_.final_vote_requests; break;
    }
    audit_.total_attempts += static_cast<int>(attempts.size());
    if (substituted) ++audit_.substituted_noops;
    audit_.attempts.insert(audit_.attempts.end(), attempts.begin(), attempts.end());
}

void GameDriver::step_question() {
    const PlayerId asker = state_.next_asker();
    const std::string prompt = prompt_for(asker, RequestKind::AskQuestion, {});
    const QuestionParser& parser = *cfg_.question_parser;

    auto parse = [&parser, &prompt, asker,
                  count = cfg_.game.player_count](const std::string& raw) {
        ParseOutcome outcome = parser.extract_question(raw, prompt);
        ParseAttempt<ParsedQuestion> attempt;
        attempt.tier = outcome.cls.tier;
        if (outcome.action && outcome.action->target != asker &&
            outcome.action->target >= 1 && outcome.action->target <= count) {
            attempt.action = std::move(outcome.action);
        }
        return attempt;
    };
    // No no-op exists for a question: exhaustion always aborts.
    auto result = request_action<ParsedQuestion>(source_for(asker), prompt, parse, cfg_.retry);
    record_audit(RequestKind::AskQuestion, result.attempts, result.substituted_noop);
    state_.apply_question(asker, result.action.target, result.action.text);
}

void GameDriver::step_answer() {
    const TurnRecord& turn = state_.transcript().back();
    RequestContext ctx;
    ctx.turn_no = turn.turn_no;
    ctx.asker = turn.asker;
    ctx.question = turn.question;
    const std::string prompt = prompt_for(turn.target, RequestKind::AnswerQuestion, ctx);

    auto parse = [](const std::string& raw) {
        return ParseAttempt<std::string>{sanitize_answer(raw), std::nullopt};
    };
    auto result = request_action<std::string>(source_for(turn.target), prompt, parse, cfg_.retry);
    record_audit(RequestKind::AnswerQuestion, result.attempts, result.substituted_noop);
    state_.apply_answer(result.action);
}

std::map<PlayerId, std::optional<PlayerId>> GameDriver::poll_accusations() {
    std::map<PlayerId, std::optional<PlayerId>> responses;
    for (PlayerId p = 1; p <= cfg_.game.player_count; ++p) {
        const std::string prompt = prompt_for(p, RequestKind::AccusationPoll, {});
        const bool right_spent = !state_.accusation_right(p);

        auto parse = [p, right_spent](const std::string& raw) {
            ParseAttempt<std::optional<PlayerId>> attempt;
            AccusationParse parsed = parse_accusation(raw);
            switch (parsed.kind) {
                case AccusationParse::Kind::NoAccusation:
                    attempt.action = std::optional<PlayerId>{};
                    break;
                case AccusationParse::Kind::Name:
                    // A spent right or a self-accusation is discarded like an
                    // unparseable response; the retry loop owns leniency.
                    if (!right_spent && parsed.target != p) {
                        attempt.action = std::optional<PlayerId>{parsed.target};
                    }
                    break;
                case AccusationParse::Kind::Unparseable:
                    break;
            }
            return attempt;
        };
        auto result = request_action<std::optional<PlayerId>>(
            source_for(p), prompt, parse, cfg_.retry,
            std::optional<std::optional<PlayerId>>{std::optional<PlayerId>{}});
        record_audit(RequestKind::AccusationPoll, result.attempts, result.substituted_noop);
        responses[p] = result.action;
    }
    return responses;
}

void GameDriver::step_accusation_poll() {
    state_.record_accusation_poll(poll_accusations());
}

void GameDriver::step_hang_vote() {
    const auto [accuser, accused] = *state_.transcript().back().accusation;
    RequestContext ctx;
    ctx.accuser = accuser;
    ctx.accused = accused;

    std::map<PlayerId, HangBallot> ballots;
    for (PlayerId p = 1; p <= cfg_.game.player_count; ++p) {
        if (p == accused) continue;
        const std::string prompt = prompt_for(p, RequestKind::HangVote, ctx);
        auto parse = [](const std::string& raw) {
            ParseAttempt<HangBallot> attempt;
            switch (parse_hang_vote(raw)) {
                case HangParse::Hang:   attempt.action = HangBallot::Hang; break;
                case HangParse::NoHang: attempt.action = HangBallot::NoHang; break;
                case HangParse::Unparseable: break;
            }
            return attempt;
        };
        auto result = request_action<HangBallot>(source_for(p), prompt, parse, cfg_.retry,
                                                 std::optional<HangBallot>{HangBallot::NoHang});
        record_audit(RequestKind::HangVote, result.attempts, result.substituted_noop);
        ballots[p] = result.action;
    }
    state_.tally_hang_vote(ballots);
}

void GameDriver::step_reveal() {
    const PlayerId spy = cfg_.game.spy;
    const std::string prompt = prompt_for(spy, RequestKind::RevealWindow, {});
    auto parse = [](const std::string& raw) {
        ParseAttempt<RevealDecision> attempt;
        if (auto decision = parse_reveal(raw)) attempt.action = *decision;
        return attempt;
    };
    auto result = request_action<RevealDecision>(
        source_for(spy), prompt, parse, cfg_.retry,
        std::optional<RevealDecision>{RevealDecision::pass()});
    record_audit(RequestKind::RevealWindow, result.attempts, result.substituted_noop);
    state_.apply_reveal(result.action);
}

void GameDriver::step_final_votes() {
    for (int round = 1; state_.phase() == GamePhase::FinalVote; ++round) {
        std::map<PlayerId, PlayerId> ballots;
        std::map<PlayerId, std::string> statements;
        for (PlayerId p = 1; p <= cfg_.game.player_count; ++p) {
            const std::string prompt = prompt_for(p, RequestKind::FinalVote, {});
            auto parse = [p](const std::string& raw) {
                ParseAttempt<FinalVoteParse> attempt;
                if (auto parsed = parse_final_vote(raw); parsed && parsed->vote != p) {
                    attempt.action = *parsed;
                }
                return attempt;
            };
            // A final vote has no no-op: everyone must name someone.
            auto result =
                request_action<FinalVoteParse>(source_for(p), prompt, parse, cfg_.retry);
            record_audit(RequestKind::FinalVote, result.attempts, result.substituted_noop);
            ballots[p] = result.action.vote;
            if (result.action.statement) statements[p] = *result.action.statement;
            final_vote_narration_ += final_vote_statement_sentence(
                p, result.action.vote, statements.count(p) ? statements[p] : "");
        }
        auto resolved = state_.tally_final_vote(ballots, round, statements);
        if (!resolved) final_vote_narration_ += revote_sentence();
    }
}

RunResult GameDriver::run() {
    const std::int64_t start_us = cfg_.clock_micros();
    bool aborted = false;
    try {
        while (!state_.finished()) {
            switch (state_.phase()) {
                case GamePhase::AwaitQuestion:  step_question(); break;
                case GamePhase::AwaitAnswer:    step_answer(); break;
                case GamePhase::AccusationPoll: step_accusation_poll(); break;
                case GamePhase::HangVoting:     step_hang_vote(); break;
                case GamePhase::RevealWindow:   step_reveal(); break;
                case GamePhase::FinalVote:      step_final_votes(); break;
                case GamePhase::Finished:       break;
            }
        }
    } catch (const GameAborted&) {
        aborted = true;
    } catch (const FixtureExhausted&) {
        aborted = true;
    } catch (const UnresolvedVoteError&) {
        aborted = true;
    } catch (const TransportError&) {
        aborted = true;
    }
    const std::int64_t end_us = cfg_.clock_micros();

    RunResult result;
    result.log = build_log(start_us, end_us, aborted);
    result.audit = audit_;
    if (!aborted) result.outcome = state_.outcome();
    return result;
}

GameLog GameDriver::build_log(std::int64_t start_us, std::int64_t end_us, bool aborted) const {
    GameLog log;
    log.gamecode = cfg_.gamecode;
    log.spy = cfg_.game.spy;
    log.location = cfg_.game.location;
    log.aborted = aborted;
    log.game_start_us = start_us;
    log.game_end_us = end_us;

    for (const TurnRecord& turn : state_.transcript()) {
        log.questions.emplace_back(turn.target, turn.question);
        if (turn.answer) log.answers.push_back(*turn.answer);
        if (turn.poll_recorded) {
            auto& row = log.accuselog[turn.turn_no];
            for (const auto& [player, named] : turn.accusations) {
                row[player] = named ? std::to_string(*named) : "X";
            }
        }
        if (turn.hang_vote) {
            VoteRecord vote;
            vote.turn = turn.turn_no;
            vote.accuser = turn.hang_vote->accuser;
            vote.accused = turn.hang_vote->accused;
            vote.ballots = turn.hang_vote->ballots;
            vote.hanged = turn.hang_vote->hanged;
            log.votelog.push_back(std::move(vote));
        }
    }
    log.total_turn = static_cast<int>(log.answers.size());

    for (const FinalVoteRecord& round : state_.final_votes()) {
        FinalVoteLogEntry entry;
        entry.round = round.round;
        entry.ballots = round.ballots;
        entry.statements = round.statements;
        log.final_votelog.push_back(std::move(entry));
    }

    log.narration = render_progress(state_.transcript());
    if (state_.finished()) {
        const GameOutcome& outcome = state_.outcome();
        log.spywin = (outcome.winner == Winner::Spy);
        log.narration += terminal_sentence(outcome);
        if (outcome.cause == OutcomeCause::WrongGuess) {
            const auto& reveal = state_.transcript().back().reveal;
            if (reveal && reveal->guess) log.reveal_guess = reveal->guess->name();
        }
    }
    return log;
}

RunResult run_game(const ScriptSet& scripts, GameDriverConfig cfg) {
    GameDriver driver(scripts, std::move(cfg));
    return driver.run();
}

GameDriverConfig build_replay_config(const GameLog& log) {
    if (log.aborted) throw ConfigError(log.gamecode + ": aborted games are not replayable");
    const std::vector<TurnRecord> turns = reconstruct_turns(log);
    const int players = 5;

    std::map<PlayerId, std::vector<std::string>> queues;
    for (const TurnRecord& rec : turns) {
        queues[rec.asker].push_back("(" + std::to_string(rec.target) + ", \"" + rec.question +
                                    "\")");
        queues[rec.target].push_back("\"" + *rec.answer + "\"");
        for (PlayerId p = 1; p <= players; ++p) {
            const auto& named = rec.accusations.at(p);
            queues[p].push_back(named ? std::to_string(*named) : "X");
        }
        if (rec.hang_vote) {
            for (const auto& [voter, ballot] : rec.hang_vote->ballots) {
                queues[voter].push_back(ballot == HangBallot::Hang ? "0" : "X");
            }
        }
        if (rec.reveal) {
            queues[log.spy].push_back(rec.reveal->is_guess() ? rec.reveal->guess->name() : "X");
        }
    }
    for (const FinalVoteLogEntry& round : log.final_votelog) {
        for (const auto& [voter, vote] : round.ballots) {
            auto statement = round.statements.find(voter);
            queues[voter].push_back(statement != round.statements.end()
                                        ? statement->second
                                        : std::to_string(vote));
        }
    }

    GameDriverConfig cfg;
    cfg.game.location = log.location;
    cfg.game.spy = log.spy;
    cfg.gamecode = log.gamecode;
    cfg.retry = RetryPolicy{0, RetryPolicy::OnExhaustion::AbortGame};
    for (PlayerId p = 1; p <= players; ++p) {
        cfg.bindings[p] = AgentBinding{p, std::make_shared<ReplaySource>(queues[p])};
    }
    auto calls = std::make_shared<int>(0);
    const std::int64_t start_us = log.game_start_us;
    const std::int64_t end_us = log.game_end_us;
    cfg.clock_micros = [calls, start_us, end_us]() {
        return (*calls)++ == 0 ? start_us : end_us;
    };
    return cfg;
}

} // namespace spyfall
