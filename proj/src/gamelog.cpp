#include "spyfall/gamelog.hpp"

#include "spyfall/errors.hpp"
#include "spyfall/orchestrator.hpp"
#include "spyfall/text.hpp"

#include <algorithm>
#include <fstream>

namespace spyfall {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kPlayers = 5;

std::string ballot_symbol(HangBallot b) {
    return b == HangBallot::Hang ? "0" : "X";
}

HangBallot ballot_from_symbol(const std::string& s, const std::string& where) {
    if (s == "0") return HangBallot::Hang;
    if (s == "X" || s == "x") return HangBallot::NoHang;
    throw LoadError(where + ": bad ballot symbol '" + s + "'");
}

const json& require_field(const json& doc, const char* name) {
    if (!doc.contains(name)) {
        throw LoadError(std::string("missing required field '") + name + "'");
    }
    return doc.at(name);
}

} // namespace

void validate(const GameLog& log) {
    if (log.gamecode.empty()) throw LoadError("gamecode: must not be empty");
    if (log.spy < 1 || log.spy > kPlayers) {
        throw LoadError("spy: " + std::to_string(log.spy) + " out of range 1..5");
    }
    if (log.location.name().empty()) throw LoadError("location: not set");
    if (log.game_start_us > log.game_end_us) {
        throw LoadError("game_start: later than game_end");
    }
    if (log.total_turn < 0) throw LoadError("total_turn: negative");
    if (log.aborted) return; // partial records keep whatever shape they reached

    if (log.total_turn < 1) throw LoadError("total_turn: completed game needs at least 1 turn");
    if (static_cast<int>(log.questions.size()) != log.total_turn) {
        throw LoadError("questions: length " + std::to_string(log.questions.size()) +
                        " != total_turn " + std::to_string(log.total_turn));
    }
    if (static_cast<int>(log.answers.size()) != log.total_turn) {
        throw LoadError("answers: length " + std::to_string(log.answers.size()) +
                        " != total_turn " + std::to_string(log.total_turn));
    }
    if (static_cast<int>(log.accuselog.size()) != log.total_turn) {
        throw LoadError("accuselog: " + std::to_string(log.accuselog.size()) +
                        " turn entries for total_turn " + std::to_string(log.total_turn));
    }
    for (int turn = 1; turn <= log.total_turn; ++turn) {
        auto it = log.accuselog.find(turn);
        if (it == log.accuselog.end()) {
            throw LoadError("accuselog: missing turn " + std::to_string(turn));
        }
        if (static_cast<int>(it->second.size()) != kPlayers) {
            throw LoadError("accuselog: turn " + std::to_string(turn) + " has " +
                            std::to_string(it->second.size()) + " entries, want 5");
        }
        for (const auto& [player, value] : it->second) {
            if (player < 1 || player > kPlayers) {
                throw LoadError("accuselog: player key " + std::to_string(player) +
                                " out of range");
            }
            if (value != "X" && value != "x" &&
                !(value.size() == 1 && value[0] >= '1' && value[0] <= '5')) {
                throw LoadError("accuselog: bad value '" + value + "' at turn " +
                                std::to_string(turn));
            }
        }
    }
    for (const auto& [target, question] : log.questions) {
        if (target < 1 || target > kPlayers) {
            throw LoadError("questions: target " + std::to_string(target) + " out of range");
        }
        if (question.empty()) throw LoadError("questions: empty question text");
    }
    for (const VoteRecord& vote : log.votelog) {
        if (vote.turn < 1 || vote.turn > log.total_turn) {
            throw LoadError("votelog: turn " + std::to_string(vote.turn) + " out of range");
        }
        if (vote.ballots.count(vote.accused)) {
            throw LoadError("votelog: accused player has a ballot");
        }
    }
    if (log.narration.empty()) throw LoadError("gamelog: narration empty for completed game");
}

nlohmann::ordered_json serialize(const GameLog& log) {
    validate(log);
    ordered_json doc;
    doc["gamecode"] = log.gamecode;
    doc["spy"] = log.spy;
    doc["location"] = log.location.name();
    doc["spywin"] = log.spywin;
    doc["game_start"] = text::format_iso8601_us(log.game_start_us);
    doc["game_end"] = text::format_iso8601_us(log.game_end_us);
    doc["gamelog"] = log.narration;

    ordered_json votes = ordered_json::array();
    for (const VoteRecord& vote : log.votelog) {
        ordered_json v;
        v["turn"] = vote.turn;
        v["accuser"] = vote.accuser;
        v["accused"] = vote.accused;
        ordered_json ballots;
        for (const auto& [player, ballot] : vote.ballots) {
            ballots[std::to_string(player)] = ballot_symbol(ballot);
        }
        v["ballots"] = ballots;
        v["hanged"] = vote.hanged;
        votes.push_back(std::move(v));
    }
    doc["votelog"] = std::move(votes);
    doc["total_turn"] = log.total_turn;

    ordered_json questions = ordered_json::array();
    for (const auto& [target, question] : log.questions) {
        questions.push_back(ordered_json::array({target, question}));
    }
    doc["questions"] = std::move(questions);
    doc["answers"] = log.answers;

    ordered_json accuse;
    for (const auto& [turn, responses] : log.accuselog) {
        ordered_json row;
        for (const auto& [player, value] : responses) {
            row[std::to_string(player)] = value;
        }
        accuse[std::to_string(turn)] = std::move(row);
    }
    doc["accuselog"] = std::move(accuse);

    if (!log.final_votelog.empty()) {
        ordered_json rounds = ordered_json::array();
        for (const FinalVoteLogEntry& entry : log.final_votelog) {
            ordered_json r;
            r["round"] = entry.round;
            ordered_json ballots;
            for (const auto& [voter, vote] : entry.ballots) {
                ballots[std::to_string(voter)] = vote;
            }
            r["ballots"] = std::move(ballots);
            if (!entry.statements.empty()) {
                ordered_json statements;
                for (const auto& [voter, statement] : entry.statements) {
                    statements[std::to_string(voter)] = statement;
                }
                r["statements"] = std::move(statements);
            }
            rounds.push_back(std::move(r));
        }
        doc["final_votelog"] = std::move(rounds);
    }
    if (log.reveal_guess) doc["reveal_guess"] = *log.reveal_guess;
    if (log.aborted) doc["aborted"] = true;
    return doc;
}

std::string serialize_text(const GameLog& log) {
    return serialize(log).dump(2) + "\n";
}

GameLog deserialize(const json& doc) {
    GameLog log;
    try {
        log.gamecode = require_field(doc, "gamecode").get<std::string>();
        log.spy = require_field(doc, "spy").get<int>();
        const auto loc_name = require_field(doc, "location").get<std::string>();
        auto loc = Location::parse(loc_name);
        if (!loc) throw LoadError("location: '" + loc_name + "' is not canonical");
        log.location = *loc;
        log.spywin = require_field(doc, "spywin").get<bool>();
        log.game_start_us = text::parse_timestamp(require_field(doc, "game_start").get<std::string>());
        log.game_end_us = text::parse_timestamp(require_field(doc, "game_end").get<std::string>());
        log.narration = require_field(doc, "gamelog").get<std::string>();

        for (const auto& v : require_field(doc, "votelog")) {
            VoteRecord vote;
            vote.turn = v.at("turn").get<int>();
            vote.accuser = v.at("accuser").get<int>();
            vote.accused = v.at("accused").get<int>();
            for (const auto& [player, symbol] : v.at("ballots").items()) {
                vote.ballots[std::stoi(player)] =
                    ballot_from_symbol(symbol.get<std::string>(), "votelog");
            }
            vote.hanged = v.at("hanged").get<bool>();
            log.votelog.push_back(std::move(vote));
        }

        log.total_turn = require_field(doc, "total_turn").get<int>();
        for (const auto& q : require_field(doc, "questions")) {
            if (!q.is_array() || q.size() != 2) {
                throw LoadError("questions: each entry must be [target, text]");
            }
            log.questions.emplace_back(q.at(0).get<int>(), q.at(1).get<std::string>());
        }
        log.answers = require_field(doc, "answers").get<std::vector<std::string>>();

        for (const auto& [turn_key, row] : require_field(doc, "accuselog").items()) {
            auto& responses = log.accuselog[std::stoi(turn_key)];
            for (const auto& [player_key, value] : row.items()) {
                responses[std::stoi(player_key)] = value.get<std::string>();
            }
        }

        if (doc.contains("final_votelog")) {
            for (const auto& r : doc.at("final_votelog")) {
                FinalVoteLogEntry entry;
                entry.round = r.at("round").get<int>();
                for (const auto& [voter, vote] : r.at("ballots").items()) {
                    entry.ballots[std::stoi(voter)] = vote.get<int>();
                }
                if (r.contains("statements")) {
                    for (const auto& [voter, statement] : r.at("statements").items()) {
                        entry.statements[std::stoi(voter)] = statement.get<std::string>();
                    }
                }
                log.final_votelog.push_back(std::move(entry));
            }
        }
        if (doc.contains("reveal_guess")) {
            log.reveal_guess = doc.at("reveal_guess").get<std::string>();
        }
        if (doc.contains("aborted")) log.aborted = doc.at("aborted").get<bool>();
    } catch (const json::exception& e) {
        throw LoadError(std::string("malformed game log: ") + e.what());
    }
    validate(log);
    return log;
}

GameLog load_gamelog(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
    try {
        return deserialize(doc);
    } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
}

void save_gamelog(const GameLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot write " + path.string());
    out << serialize_text(log);
}

OutcomeCause infer_cause(const GameLog& log) {
    for (const VoteRecord& vote : log.votelog) {
        if (vote.hanged) {
            return vote.accused == log.spy ? OutcomeCause::HangedSpy : OutcomeCause::HangedNonSpy;
        }
    }
    const std::string& n = log.narration;
    auto ends_with = [&n](std::string_view suffix) {
        return n.size() >= suffix.size() && n.compare(n.size() - suffix.size(),
                                                      suffix.size(), suffix) == 0;
    };
    if (ends_with("and they guessed the location. The spy wins.")) {
        return OutcomeCause::CorrectGuess;
    }
    if (ends_with("they failed to guess the location. The not-spy players win.")) {
        return OutcomeCause::WrongGuess;
    }
    if (n.find("received a majority of the votes, and they were the spy") != std::string::npos &&
        ends_with("The not-spy players win.")) {
        return OutcomeCause::FinalVoteCorrect;
    }
    if (n.find("received a majority of the votes, but they were not the spy") !=
            std::string::npos &&
        ends_with("The spy wins.")) {
        return OutcomeCause::FinalVoteWrong;
    }
    throw LoadError("gamelog: cannot infer a terminal cause from the narration");
}

std::vector<TurnRecord> reconstruct_turns(const GameLog& log) {
    const OutcomeCause cause = infer_cause(log);
    std::vector<TurnRecord> turns;
    PlayerId asker = 1;
    for (int i = 0; i < log.total_turn; ++i) {
        TurnRecord rec;
        rec.turn_no = i + 1;
        rec.asker = asker;
        rec.target = log.questions[static_cast<size_t>(i)].first;
        rec.question = log.questions[static_cast<size_t>(i)].second;
        rec.answer = log.answers[static_cast<size_t>(i)];
        asker = rec.target;

        auto accuse_it = log.accuselog.find(rec.turn_no);
        if (accuse_it != log.accuselog.end()) {
            rec.poll_recorded = true;
            for (const auto& [player, value] : accuse_it->second) {
                rec.accusations[player] = (value == "X" || value == "x")
                                              ? std::optional<PlayerId>{}
                                              : std::optional<PlayerId>{value[0] - '0'};
            }
        }
        for (const VoteRecord& vote : log.votelog) {
            if (vote.turn != rec.turn_no) continue;
            rec.accusation = std::make_pair(vote.accuser, vote.accused);
            HangVoteRecord hv;
            hv.accuser = vote.accuser;
            hv.accused = vote.accused;
            hv.ballots = vote.ballots;
            hv.hanged = vote.hanged;
            rec.hang_vote = hv;
        }

        const bool last = (i + 1 == log.total_turn);
        const bool hang_ended = rec.hang_vote && rec.hang_vote->hanged;
        if (hang_ended) {
            // no reveal window this turn
        } else if (!last) {
            rec.reveal = RevealDecision::pass();
        } else {
            switch (cause) {
                case OutcomeCause::CorrectGuess:
                    rec.reveal = RevealDecision::guess_location(log.location);
                    break;
                case OutcomeCause::WrongGuess: {
                    if (!log.reveal_guess) {
                        throw LoadError("reveal_guess: required to reconstruct a wrong-guess game");
                    }
                    auto guess = Location::parse(*log.reveal_guess);
                    if (!guess) throw LoadError("reveal_guess: not a canonical location");
                    rec.reveal = RevealDecision::guess_location(*guess);
                    break;
                }
                case OutcomeCause::FinalVoteCorrect:
                case OutcomeCause::FinalVoteWrong:
                    rec.reveal = RevealDecision::pass();
                    break;
                default:
                    break;
            }
        }
        turns.push_back(std::move(rec));
    }
    return turns;
}

std::string reconstruct_narration(const GameLog& log) {
    const OutcomeCause cause = infer_cause(log);
    const std::vector<TurnRecord> turns = reconstruct_turns(log);

    PlayerId subject = log.spy;
    if (cause == OutcomeCause::HangedSpy || cause == OutcomeCause::HangedNonSpy) {
        for (const VoteRecord& vote : log.votelog) {
            if (vote.hanged) subject = vote.accused;
        }
    } else if (cause == OutcomeCause::FinalVoteCorrect || cause == OutcomeCause::FinalVoteWrong) {
        if (log.final_votelog.empty() || !log.final_votelog.back().ballots.size()) {
            throw LoadError("final_votelog: required to reconstruct a final-vote game");
        }
        std::map<PlayerId, int> tally;
        for (const auto& [voter, vote] : log.final_votelog.back().ballots) ++tally[vote];
        subject = std::max_element(tally.begin(), tally.end(),
                                   [](const auto& a, const auto& b) {
                                       return a.second < b.second;
                                   })
                      ->first;
    }
    GameOutcome outcome{winner_for(cause), cause, subject};
    return render_progress(turns) + terminal_sentence(outcome);
}

ReplayReport verify_replay(const GameLog& log, const ScriptSet& scripts) {
    ReplayReport report;
    if (log.aborted) {
        report.mismatches.push_back("aborted: aborted games are not replayable");
        return report;
    }
    const OutcomeCause cause = infer_cause(log);
    RunResult result = run_game(scripts, build_replay_config(log));
    const GameLog& replayed = result.log;

    auto check = [&report](bool ok, const std::string& message) {
        if (!ok) report.mismatches.push_back(message);
    };
    check(!replayed.aborted, "aborted: replay aborted unexpectedly");
    check(replayed.spywin == log.spywin,
          "spywin: got " + std::string(replayed.spywin ? "true" : "false") + ", want " +
              (log.spywin ? "true" : "false"));
    check(replayed.total_turn == log.total_turn,
          "total_turn: got " + std::to_string(replayed.total_turn) + ", want " +
              std::to_string(log.total_turn));
    if (result.outcome) {
        check(result.outcome->cause == cause,
              std::string("outcome: got ") + to_string(result.outcome->cause) + ", want " +
                  to_string(cause));
    } else {
        report.mismatches.push_back("outcome: replay produced none");
    }
    if (replayed.narration != log.narration) {
        size_t i = 0;
        const size_t limit = std::min(replayed.narration.size(), log.narration.size());
        while (i < limit && replayed.narration[i] == log.narration[i]) ++i;
        report.mismatches.push_back("gamelog: narration diverges at byte " + std::to_string(i));
    }
    check(replayed.votelog == log.votelog, "votelog: differs");
    check(replayed.questions == log.questions, "questions: differ");
    check(replayed.answers == log.answers, "answers: differ");
    check(replayed.accuselog == log.accuselog, "accuselog: differs");
    check(replayed.game_start_us == log.game_start_us, "game_start: differs");
    check(replayed.game_end_us == log.game_end_us, "game_end: differs");

    report.all_match = report.mismatches.empty();
    return report;
}

} // namespace spyfall
