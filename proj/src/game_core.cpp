#include "spyfall/game_core.hpp"

#include "spyfall/errors.hpp"

#include <algorithm>

namespace spyfall {

void GameConfig::validate() const {
    if (player_count < 2) throw ConfigError("player_count must be at least 2");
    if (spy < 1 || spy > player_count) {
        throw ConfigError("spy " + std::to_string(spy) + " out of range 1.." +
                          std::to_string(player_count));
    }
    if (max_turns < 1) throw ConfigError("max_turns must be >= 1");
    if (hang_threshold < 1 || hang_threshold > player_count) {
        throw ConfigError("hang_threshold out of range 1.." + std::to_string(player_count));
    }
    if (location.name().empty()) throw ConfigError("location is not set");
}

const char* to_string(GamePhase phase) {
    switch (phase) {
        case GamePhase::AwaitQuestion:  return "AwaitQuestion";
        case GamePhase::AwaitAnswer:    return "AwaitAnswer";
        case GamePhase::AccusationPoll: return "AccusationPoll";
        case GamePhase::HangVoting:     return "HangVoting";
        case GamePhase::RevealWindow:   return "RevealWindow";
        case GamePhase::FinalVote:      return "FinalVote";
        case GamePhase::Finished:       return "Finished";
    }
    return "?";
}

Winner winner_for(OutcomeCause cause) {
    switch (cause) {
        case OutcomeCause::HangedSpy:
        case OutcomeCause::WrongGuess:
        case OutcomeCause::FinalVoteCorrect:
            return Winner::NonSpies;
        case OutcomeCause::HangedNonSpy:
        case OutcomeCause::CorrectGuess:
        case OutcomeCause::FinalVoteWrong:
            return Winner::Spy;
    }
    return Winner::Spy;
}

const char* to_string(OutcomeCause cause) {
    switch (cause) {
        case OutcomeCause::HangedSpy:        return "HangedSpy";
        case OutcomeCause::HangedNonSpy:     return "HangedNonSpy";
        case OutcomeCause::CorrectGuess:     return "CorrectGuess";
        case OutcomeCause::WrongGuess:       return "WrongGuess";
        case OutcomeCause::FinalVoteCorrect: return "FinalVoteCorrect";
        case OutcomeCause::FinalVoteWrong:   return "FinalVoteWrong";
    }
    return "?";
}

const char* to_string(Winner winner) {
    return winner == Winner::Spy ? "Spy" : "NonSpies";
}

GameState::GameState(GameConfig config) : config_(std::move(config)) {
    config_.validate();
    for (PlayerId p = 1; p <= config_.player_count; ++p) {
        accusation_rights_[p] = true;
    }
}

GameState new_game(const GameConfig& config) {
    return GameState(config);
}

bool GameState::accusation_right(PlayerId player) const {
    auto it = accusation_rights_.find(player);
    if (it == accusation_rights_.end()) {
        throw ProtocolViolation("no such player: " + std::to_string(player));
    }
    return it->second;
}

const GameOutcome& GameState::outcome() const {
    if (!outcome_) throw NotReadyError("game is not finished");
    return *outcome_;
}

void GameState::require_phase(GamePhase expected, const char* op) const {
    if (phase_ != expected) {
        throw ProtocolViolation(std::string(op) + " not allowed in phase " + to_string(phase_));
    }
}

void GameState::require_player(PlayerId player, const char* what) const {
    if (player < 1 || player > config_.player_count) {
        throw ProtocolViolation(std::string(what) + " " + std::to_string(player) +
                                " out of range 1.." + std::to_string(config_.player_count));
    }
}

TurnRecord& GameState::open_turn() {
    return transcript_.back();
}

void GameState::finish(OutcomeCause cause, PlayerId subject) {
    outcome_ = GameOutcome{winner_for(cause), cause, subject};
    phase_ = GamePhase::Finished;
}

void GameState::apply_question(PlayerId asker, PlayerId target, std::string question) {
    require_phase(GamePhase::AwaitQuestion, "apply_question");
    require_player(asker, "asker");
    require_player(target, "target");
    if (asker != next_asker_) {
        throw ProtocolViolation("player " + std::to_string(asker) + " asked out of turn; expected " +
                                std::to_string(next_asker_));
    }
    if (target == asker) throw ProtocolViolation("players may not question themselves");

    TurnRecord rec;
    rec.turn_no = current_turn_;
    rec.asker = asker;
    rec.target = target;
    rec.question = std::move(question);
    transcript_.push_back(std::move(rec));
    phase_ = GamePhase::AwaitAnswer;
}

void GameState::apply_answer(std::string answer) {
    require_phase(GamePhase::AwaitAnswer, "apply_answer");
    TurnRecord& rec = open_turn();
    rec.answer = std::move(answer);
    next_asker_ = rec.target; // the questioned player asks next turn
    phase_ = GamePhase::AccusationPoll;
}

void GameState::record_accusation_poll(
        const std::map<PlayerId, std::optional<PlayerId>>& responses) {
    require_phase(GamePhase::AccusationPoll, "record_accusation_poll");
    if (static_cast<int>(responses.size()) != config_.player_count) {
        throw ProtocolViolation("accusation poll must cover all " +
                                std::to_string(config_.player_count) + " players");
    }
    for (const auto& [player, named] : responses) {
        require_player(player, "poll respondent");
        if (!named) continue;
        require_player(*named, "accused");
        if (*named == player) {
            throw ProtocolViolation("player " + std::to_string(player) + " accused themself");
        }
        if (!accusation_rights_.at(player)) {
            throw ProtocolViolation("player " + std::to_string(player) +
                                    " has already spent their accusation right");
        }
    }

    TurnRecord& rec = open_turn();
    rec.accusations = responses;
    rec.poll_recorded = true;

    // First accuser in player order wins the turn's single vote; later
    // accusers in the same poll keep their right.
    for (PlayerId p = 1; p <= config_.player_count; ++p) {
        const auto& named = responses.at(p);
        if (!named) continue;
        accusation_rights_[p] = false;
        rec.accusation = std::make_pair(p, *named);
        phase_ = GamePhase::HangVoting;
        return;
    }
    phase_ = GamePhase::RevealWindow;
}

void GameState::tally_hang_vote(const std::map<PlayerId, HangBallot>& ballots) {
    require_phase(GamePhase::HangVoting, "tally_hang_vote");
    TurnRecord& rec = open_turn();
    const auto [accuser, accused] = *rec.accusation;

    if (ballots.count(accused)) {
        throw ProtocolViolation("accused player " + std::to_string(accused) + " may not vote");
    }
    if (static_cast<int>(ballots.size()) != config_.player_count - 1) {
        throw ProtocolViolation("hang vote requires a ballot from every player except the accused");
    }
    int hang_count = 0;
    for (const auto& [player, ballot] : ballots) {
        require_player(player, "voter");
        if (ballot == HangBallot::Hang) ++hang_count;
    }

    HangVoteRecord vote;
    vote.accuser = accuser;
    vote.accused = accused;
    vote.ballots = ballots;
    vote.hanged = hang_count >= config_.hang_threshold;
    rec.hang_vote = vote;

    if (vote.hanged) {
        finish(accused == config_.spy ? OutcomeCause::HangedSpy : OutcomeCause::HangedNonSpy,
               accused);
    } else {
        phase_ = GamePhase::RevealWindow; // the game continues; the spy may still reveal
    }
}

void GameState::apply_reveal(const RevealDecision& decision) {
    require_phase(GamePhase::RevealWindow, "apply_reveal");
    TurnRecord& rec = open_turn();
    rec.reveal = decision;

    if (decision.is_guess()) {
        const bool correct = *decision.guess == config_.location;
        finish(correct ? OutcomeCause::CorrectGuess : OutcomeCause::WrongGuess, config_.spy);
        return;
    }
    advance_after_reveal_or_pass();
}

void GameState::advance_after_reveal_or_pass() {
    if (current_turn_ < config_.max_turns) {
        ++current_turn_;
        phase_ = GamePhase::AwaitQuestion;
    } else {
        phase_ = GamePhase::FinalVote;
    }
}

std::optional<PlayerId> GameState::tally_final_vote(
        const std::map<PlayerId, PlayerId>& ballots, int round,
        std::map<PlayerId, std::string> statements) {
    require_phase(GamePhase::FinalVote, "tally_final_vote");
    if (round != static_cast<int>(final_votes_.size()) + 1) {
        throw ProtocolViolation("final vote round " + std::to_string(round) + " out of sequence");
    }
    if (round > kMaxFinalVoteRounds) {
        throw UnresolvedVoteError("final vote unresolved after " +
                                  std::to_string(kMaxFinalVoteRounds) + " rounds");
    }
    if (static_cast<int>(ballots.size()) != config_.player_count) {
        throw ProtocolViolation("final vote must cover all players");
    }

    std::map<PlayerId, int> tally;
    for (const auto& [voter, vote] : ballots) {
        require_player(voter, "voter");
        require_player(vote, "vote target");
        if (vote == voter) {
            throw ProtocolViolation("player " + std::to_string(voter) + " voted for themself");
        }
        ++tally[vote];
    }

    const int majority = config_.player_count / 2 + 1;
    std::optional<PlayerId> resolved;
    for (const auto& [player, count] : tally) {
        if (count >= majority) {
            resolved = player;
            break;
        }
    }

    FinalVoteRecord rec;
    rec.round = round;
    rec.ballots = ballots;
    rec.statements = std::move(statements);
    rec.majority = resolved;
    final_votes_.push_back(std::move(rec));

    if (resolved) {
        finish(*resolved == config_.spy ? OutcomeCause::FinalVoteCorrect
                                        : OutcomeCause::FinalVoteWrong,
               *resolved);
    }
    return resolved;
}

} // namespace spyfall
