#pragma once

#include "spyfall/game_core.hpp"
#include "spyfall/locations.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spyfall {

// Three-level response taxonomy: usable as-is, usable after repair, unusable.
enum class ResponseTier {
    SuccessfulWellFormed,  // exact (n,"question") tuple
    SuccessfulOffContext,  // well-formed but off-game content (leak / annotation)
    UsableInvalidFormat,   // addressed form convertible to a tuple
    UsableSuperfluous,     // question recoverable after boilerplate removal
    UsableMultipleAnswers, // several candidate segments; first question kept
    UnusableRefusal,       // no extractable question
    UnusableEcho,          // response substantially repeats the prompt
};

const char* to_string(ResponseTier tier);
bool is_usable(ResponseTier tier); // any tier that yields an action

struct ResponseClass {
    ResponseTier tier = ResponseTier::UnusableRefusal;
    bool keyword_leak = false;     // mechanical, requires the location
    bool not_game_related = false; // only ever set from manual annotations
};

struct ParsedQuestion {
    PlayerId target = 0;
    std::string text; // quotes stripped

    bool operator==(const ParsedQuestion&) const = default;
};

// Mechanical facts observed while classifying; feeds the error-frequency
// report without re-walking the text.
struct ParseDiagnostics {
    int tuple_count = 0;
    int question_candidates = 0;
    int answer_segments = 0;
    bool boilerplate_present = false;
    bool refusal_marker_present = false;
    double echo_ratio = 0.0; // 0 unless a prompt was supplied
};

struct ParseOutcome {
    ResponseClass cls;
    std::optional<ParsedQuestion> action; // present iff the tier is usable
    std::string raw;
    ParseDiagnostics diag;
};

// Ordered boilerplate markers ("as an AI language model", ...), shipped as a
// data file so new model tics can be added without code changes.
class BoilerplatePatterns {
public:
    BoilerplatePatterns() = default;
    static BoilerplatePatterns load(const std::filesystem::path& path);

    bool any_in(std::string_view raw) const;
    const std::vector<std::string>& patterns() const { return patterns_; }

private:
    std::vector<std::string> patterns_;
};

// Classifies question-phase responses and repairs them into typed actions.
class QuestionParser {
public:
    explicit QuestionParser(BoilerplatePatterns patterns) : patterns_(std::move(patterns)) {}

    // `prompt`, when supplied, enables echo detection (a response is an echo
    // when at least half of it consists of verbatim prompt substrings of 40+
    // characters).
    ParseOutcome extract_question(const std::string& raw, std::string_view prompt = {}) const;

    static constexpr double kEchoRatioThreshold = 0.5;
    static constexpr std::size_t kEchoMinBlock = 40;

private:
    BoilerplatePatterns patterns_;
};

// True iff the location name occurs in the question as a whole phrase,
// case-insensitively; multi-word locations match as a phrase.
bool detect_keyword_leak(std::string_view question, const Location& location);

struct AccusationParse {
    enum class Kind { Name, NoAccusation, Unparseable };
    Kind kind = Kind::Unparseable;
    PlayerId target = 0;
};
AccusationParse parse_accusation(const std::string& raw);

enum class HangParse { Hang, NoHang, Unparseable };
HangParse parse_hang_vote(const std::string& raw);

// nullopt = unparseable; Pass for "X"; Guess for a canonical location name.
std::optional<RevealDecision> parse_reveal(const std::string& raw);

struct FinalVoteParse {
    PlayerId vote = 0;
    std::optional<std::string> statement; // truncated at three sentences
};
std::optional<FinalVoteParse> parse_final_vote(const std::string& raw);

// Content of the first balanced double-quoted span, else the trimmed raw.
std::string sanitize_answer(const std::string& raw);

} // namespace spyfall
