#include "spyfall/scripts.hpp"

#include "spyfall/errors.hpp"
#include "spyfall/text.hpp"

#include <array>

namespace spyfall {

namespace {

constexpr std::array<RequestKind, 6> kAllRequestKinds = {
    RequestKind::AskQuestion,   RequestKind::AnswerQuestion, RequestKind::AccusationPoll,
    RequestKind::HangVote,      RequestKind::RevealWindow,   RequestKind::FinalVote,
};

// Archived-log narration pieces. The punctuation (missing spaces included)
// must stay exactly as the archived games printed it.
constexpr const char* kQaTemplate =
    "In the {n}th question, player {asker} asked player {target} the following."
    "{question} To this question, player {target} responded with the following."
    "\"{answer}\"";
constexpr const char* kNoAccusationSentence =
    " At the end of this question, no one accused anyone else of being a spy.";
constexpr const char* kAccusationSentence =
    " At the end of this question, player {accuser} accused player {accused} of being a spy.";
constexpr const char* kVoteFailedSentence =
    " A vote was held on player {accused}, but the player was not hanged.";
constexpr const char* kNoRevealSentence = " The spy did not reveal their identity.";

} // namespace

const char* to_string(RequestKind kind) {
    switch (kind) {
        case RequestKind::AskQuestion:    return "AskQuestion";
        case RequestKind::AnswerQuestion: return "AnswerQuestion";
        case RequestKind::AccusationPoll: return "AccusationPoll";
        case RequestKind::HangVote:       return "HangVote";
        case RequestKind::RevealWindow:   return "RevealWindow";
        case RequestKind::FinalVote:      return "FinalVote";
    }
    return "?";
}

const char* request_file_stem(RequestKind kind) {
    switch (kind) {
        case RequestKind::AskQuestion:    return "ask_question";
        case RequestKind::AnswerQuestion: return "answer_question";
        case RequestKind::AccusationPoll: return "accusation_poll";
        case RequestKind::HangVote:       return "hang_vote";
        case RequestKind::RevealWindow:   return "reveal_window";
        case RequestKind::FinalVote:      return "final_vote";
    }
    return "?";
}

ScriptSet load_scripts(const std::filesystem::path& dir) {
    ScriptSet set;
    auto load = [&](const std::string& rel) {
        std::string content = text::read_file(dir / rel);
        if (content.empty()) throw LoadError("script file is empty: " + (dir / rel).string());
        set.checksums[rel] = text::fnv1a64(content);
        return content;
    };
    set.rule_text = load("rule.txt");
    set.strategy_text = load("strategy.txt");
    for (RequestKind kind : kAllRequestKinds) {
        set.request_templates[kind] =
            load(std::string("requests/") + request_file_stem(kind) + ".txt");
    }
    return set;
}

void RolePreamble::validate() const {
    if (player < 1) throw ConfigError("preamble player out of range");
    if (is_spy && location) throw ConfigError("the spy must not be given the location");
    if (!is_spy && !location) throw ConfigError("non-spy preamble requires a location");
}

std::string render_preamble(const RolePreamble& preamble) {
    preamble.validate();
    std::string out = "You are player " + std::to_string(preamble.player) + ". ";
    if (preamble.is_spy) {
        out += "You're the spy.";
    } else {
        out += "You're not a spy; the location is '" + preamble.location->name() + "'.";
    }
    return out;
}

std::string render_progress(std::span<const TurnRecord> transcript) {
    std::string out;
    for (const TurnRecord& turn : transcript) {
        if (!turn.answer) continue; // question pending; nothing to narrate yet
        std::string block = kQaTemplate;
        text::replace_all(block, "{n}", std::to_string(turn.turn_no));
        text::replace_all(block, "{asker}", std::to_string(turn.asker));
        text::replace_all(block, "{target}", std::to_string(turn.target));
        text::replace_all(block, "{question}", turn.question);
        text::replace_all(block, "{answer}", *turn.answer);
        out += block;

        if (!turn.poll_recorded) continue;
        if (turn.accusation) {
            std::string sentence = kAccusationSentence;
            text::replace_all(sentence, "{accuser}", std::to_string(turn.accusation->first));
            text::replace_all(sentence, "{accused}", std::to_string(turn.accusation->second));
            out += sentence;
        } else {
            out += kNoAccusationSentence;
        }
        if (turn.hang_vote && !turn.hang_vote->hanged) {
            std::string sentence = kVoteFailedSentence;
            text::replace_all(sentence, "{accused}", std::to_string(turn.hang_vote->accused));
            out += sentence;
        }
        if (turn.reveal && !turn.reveal->is_guess()) {
            out += kNoRevealSentence;
        }
    }
    return out;
}

std::string render_request(const ScriptSet& scripts, RequestKind kind,
                           const RequestContext& context) {
    auto it = scripts.request_templates.find(kind);
    if (it == scripts.request_templates.end()) {
        throw TemplateError(std::string("no template loaded for ") + to_string(kind));
    }
    std::string out = it->second;

    auto sub = [&](std::string_view key, const std::string& value) {
        text::replace_all(out, key, value);
    };
    switch (kind) {
        case RequestKind::AnswerQuestion:
            if (!context.turn_no || !context.asker || !context.question) {
                throw TemplateError("AnswerQuestion needs turn_no, asker, and question");
            }
            sub("{n}", std::to_string(*context.turn_no));
            sub("{asker}", std::to_string(*context.asker));
            sub("{question}", *context.question);
            break;
        case RequestKind::HangVote:
            if (!context.accuser || !context.accused) {
                throw TemplateError("HangVote needs accuser and accused");
            }
            sub("{accuser}", std::to_string(*context.accuser));
            sub("{accused}", std::to_string(*context.accused));
            break;
        default:
            break;
    }
    for (const char* slot : {"{n}", "{asker}", "{question}", "{accuser}", "{accused}"}) {
        if (out.find(slot) != std::string::npos) {
            throw TemplateError(std::string("unfilled placeholder ") + slot + " in " +
                                to_string(kind));
        }
    }
    return out;
}

std::string assemble_prompt(const ScriptSet& scripts, const std::string& preamble,
                            const std::string& progress, const std::string& request) {
    std::string out = scripts.rule_text;
    out += "\n\n";
    out += scripts.strategy_text;
    out += "\n\n";
    out += preamble;
    out += "\n\n";
    if (!progress.empty()) {
        out += progress;
        out += "\n\n";
    }
    out += request;
    return out;
}

std::string terminal_sentence(const GameOutcome& outcome) {
    const std::string subject = std::to_string(outcome.subject);
    switch (outcome.cause) {
        case OutcomeCause::CorrectGuess:
            return "Player " + subject +
                   " reveals that they are the spy, and they guessed the location. The spy wins.";
        case OutcomeCause::WrongGuess:
            return "Player " + subject +
                   " reveals that they are the spy, and they failed to guess the location. "
                   "The not-spy players win.";
        case OutcomeCause::HangedSpy:
            return "Player " + subject +
                   " was hanged, and they were the spy. The not-spy players win.";
        case OutcomeCause::HangedNonSpy:
            return "Player " + subject +
                   " was hanged, but they were not the spy. The spy wins.";
        case OutcomeCause::FinalVoteCorrect:
            return "In the final vote, player " + subject +
                   " received a majority of the votes, and they were the spy. "
                   "The not-spy players win.";
        case OutcomeCause::FinalVoteWrong:
            return "In the final vote, player " + subject +
                   " received a majority of the votes, but they were not the spy. The spy wins.";
    }
    return {};
}

std::string final_vote_statement_sentence(PlayerId voter, PlayerId vote,
                                          const std::string& statement) {
    std::string out = "In the final vote, player " + std::to_string(voter) +
                      " voted for player " + std::to_string(vote) + ".";
    if (!statement.empty()) {
        out += " They said the following.\"" + statement + "\"";
    }
    return out;
}

std::string revote_sentence() {
    return "No player received a majority of the votes, so the vote is redone.";
}

} // namespace spyfall
