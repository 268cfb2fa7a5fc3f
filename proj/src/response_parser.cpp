#include "spyfall/response_parser.hpp"

#include "spyfall/errors.hpp"
#include "spyfall/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace spyfall {

namespace {

// Phrases that mark a response as refusing or deferring rather than playing.
constexpr const char* kRefusalMarkers[] = {
    "I am not capable",
    "not a valid question",
    "invalid",
    "violation",
};

const std::regex& tuple_re() {
    static const std::regex re(R"re(\(\s*([1-5])\s*,\s*"([^"]+)"\s*\))re");
    return re;
}

struct Candidate {
    size_t begin = 0;
    size_t end = 0;
    bool is_tuple = false;
    PlayerId target = 0;
    std::string question;
};

bool overlaps(size_t b, size_t e, const std::vector<Candidate>& taken) {
    for (const auto& c : taken) {
        if (b < c.end && c.begin < e) return true;
    }
    return false;
}

std::string clean_question(std::string_view s) {
    std::string out = text::trim(s);
    // ParsedQuestion text carries no double quotes; dropping embedded ones
    // keeps the repaired tuple re-parseable.
    out.erase(std::remove(out.begin(), out.end(), '"'), out.end());
    return text::trim(out);
}

// Addressed-form patterns a human would read as "a question aimed at player
// N", in priority order. Wider patterns come later so that quoted forms win
// at the same position.
struct AddressedPattern {
    std::regex re;
    int target_group;
    int text_group;
};

const std::vector<AddressedPattern>& addressed_patterns() {
    static const std::vector<AddressedPattern> patterns = [] {
        std::vector<AddressedPattern> v;
        auto add = [&v](const char* pat, int tg, int xg) {
            v.push_back({std::regex(pat, std::regex::icase), tg, xg});
        };
        // To player 2: "..."
        add(R"re(To\s+player\s+([1-5])\s*[:,]\s*"([^"]+)")re", 1, 2);
        // Player 1 asks Player 2, "..."
        add(R"re(Player\s+[0-9]\s+asks\s+Player\s+([1-5])\s*[:,]?\s*"([^"]+)")re", 1, 2);
        // (Player 2, "...")
        add(R"re(\(\s*Player\s+([1-5])\s*,\s*"([^"]+)"\s*\))re", 1, 2);
        // "..." to player 2
        add(R"re("([^"]+)"\s+to\s+player\s+([1-5]))re", 2, 1);
        // (Player 2), unquoted question to end of text
        add(R"re(\(\s*Player\s+([1-5])\s*\)\s*,\s*([\s\S]+)$)re", 1, 2);
        // Player 2, unquoted question ending in '?'
        add(R"re(Player\s+([1-5])\s*[:,]\s*([^"()]*\?))re", 1, 2);
        // 2, "..."  (tuple missing its parentheses, at the very start)
        add(R"re(^\s*([1-5])\s*,\s*"([^"]+)")re", 1, 2);
        // To player 2: unquoted remainder (request-echo style)
        add(R"re(To\s+player\s+([1-5])\s*:\s*([\s\S]+)$)re", 1, 2);
        return v;
    }();
    return patterns;
}

// Player 2: "..."  with non-question content: someone answering inside the
// response (the interaction-within-a-response error).
const std::regex& attributed_quote_re() {
    static const std::regex re(R"re(Player\s+[0-9]\s*:\s*"([^"]+)")re", std::regex::icase);
    return re;
}

double compute_echo_ratio(const std::string& raw, std::string_view prompt, size_t min_block) {
    if (raw.size() < min_block || prompt.empty()) return 0.0;
    const std::string prompt_str(prompt);
    size_t covered = 0;
    size_t i = 0;
    while (i + min_block <= raw.size()) {
        if (prompt_str.find(raw.substr(i, min_block)) == std::string::npos) {
            ++i;
            continue;
        }
        // Grow the verbatim block as far as it still occurs in the prompt.
        size_t lo = min_block;
        size_t hi = raw.size() - i;
        while (lo < hi) {
            size_t mid = lo + (hi - lo + 1) / 2;
            if (prompt_str.find(raw.substr(i, mid)) != std::string::npos) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        covered += lo;
        i += lo;
    }
    return static_cast<double>(covered) / static_cast<double>(raw.size());
}

bool ends_with_question_mark(std::string_view s) {
    std::string t = text::trim(s);
    return !t.empty() && t.back() == '?';
}

} // namespace

const char* to_string(ResponseTier tier) {
    switch (tier) {
        case ResponseTier::SuccessfulWellFormed:  return "SuccessfulWellFormed";
        case ResponseTier::SuccessfulOffContext:  return "SuccessfulOffContext";
        case ResponseTier::UsableInvalidFormat:   return "UsableInvalidFormat";
        case ResponseTier::UsableSuperfluous:     return "UsableSuperfluous";
        case ResponseTier::UsableMultipleAnswers: return "UsableMultipleAnswers";
        case ResponseTier::UnusableRefusal:       return "UnusableRefusal";
        case ResponseTier::UnusableEcho:          return "UnusableEcho";
    }
    return "?";
}

bool is_usable(ResponseTier tier) {
    return tier != ResponseTier::UnusableRefusal && tier != ResponseTier::UnusableEcho;
}

BoilerplatePatterns BoilerplatePatterns::load(const std::filesystem::path& path) {
    BoilerplatePatterns out;
    std::istringstream in(text::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!text::trim(line).empty()) out.patterns_.push_back(line);
    }
    if (out.patterns_.empty()) throw LoadError("no boilerplate patterns in " + path.string());
    return out;
}

bool BoilerplatePatterns::any_in(std::string_view raw) const {
    for (const auto& p : patterns_) {
        if (raw.find(p) != std::string_view::npos) return true;
    }
    return false;
}

ParseOutcome QuestionParser::extract_question(const std::string& raw,
                                              std::string_view prompt) const {
    ParseOutcome out;
    out.raw = raw;
    ParseDiagnostics& diag = out.diag;

    diag.boilerplate_present = patterns_.any_in(raw);
    for (const char* marker : kRefusalMarkers) {
        if (raw.find(marker) != std::string::npos) {
            diag.refusal_marker_present = true;
            break;
        }
    }

    std::vector<Candidate> candidates;
    for (auto it = std::sregex_iterator(raw.begin(), raw.end(), tuple_re());
         it != std::sregex_iterator(); ++it) {
        Candidate c;
        c.begin = static_cast<size_t>(it->position(0));
        c.end = c.begin + static_cast<size_t>(it->length(0));
        c.is_tuple = true;
        c.target = (*it)[1].str()[0] - '0';
        c.question = clean_question((*it)[2].str());
        if (!c.question.empty()) candidates.push_back(std::move(c));
    }
    diag.tuple_count = static_cast<int>(candidates.size());

    for (const auto& pattern : addressed_patterns()) {
        for (auto it = std::sregex_iterator(raw.begin(), raw.end(), pattern.re);
             it != std::sregex_iterator(); ++it) {
            const size_t b = static_cast<size_t>(it->position(0));
            const size_t e = b + static_cast<size_t>(it->length(0));
            if (overlaps(b, e, candidates)) continue;
            Candidate c;
            c.begin = b;
            c.end = e;
            c.is_tuple = false;
            c.target = (*it)[pattern.target_group].str()[0] - '0';
            c.question = clean_question((*it)[pattern.text_group].str());
            if (!c.question.empty()) candidates.push_back(std::move(c));
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.begin < b.begin; });
    diag.question_candidates = static_cast<int>(candidates.size());

    for (auto it = std::sregex_iterator(raw.begin(), raw.end(), attributed_quote_re());
         it != std::sregex_iterator(); ++it) {
        const size_t b = static_cast<size_t>(it->position(0));
        const size_t e = b + static_cast<size_t>(it->length(0));
        if (overlaps(b, e, candidates)) continue;
        if (ends_with_question_mark((*it)[1].str())) continue;
        ++diag.answer_segments;
    }

    const std::string trimmed = text::trim(raw);

    if (candidates.empty()) {
        if (diag.refusal_marker_present || diag.boilerplate_present) {
            out.cls.tier = ResponseTier::UnusableRefusal;
            return out;
        }
        diag.echo_ratio = compute_echo_ratio(raw, prompt, kEchoMinBlock);
        out.cls.tier = diag.echo_ratio >= kEchoRatioThreshold ? ResponseTier::UnusableEcho
                                                              : ResponseTier::UnusableRefusal;
        return out;
    }

    const Candidate& first = candidates.front();
    out.action = ParsedQuestion{first.target, first.question};

    if (candidates.size() >= 2 || diag.answer_segments > 0) {
        out.cls.tier = ResponseTier::UsableMultipleAnswers;
        return out;
    }

    if (first.is_tuple) {
        std::smatch m;
        const bool exact = std::regex_match(trimmed, m, tuple_re());
        out.cls.tier = exact ? ResponseTier::SuccessfulWellFormed
                             : ResponseTier::UsableSuperfluous;
        return out;
    }

    out.cls.tier = diag.boilerplate_present || diag.refusal_marker_present
                       ? ResponseTier::UsableSuperfluous
                       : ResponseTier::UsableInvalidFormat;
    return out;
}

bool detect_keyword_leak(std::string_view question, const Location& location) {
    return text::contains_phrase_ci(question, location.name());
}

AccusationParse parse_accusation(const std::string& raw) {
    const std::string t = text::trim(raw);
    if (t == "X" || t == "x") return {AccusationParse::Kind::NoAccusation, 0};
    if (t.size() == 1 && t[0] >= '1' && t[0] <= '5') {
        return {AccusationParse::Kind::Name, t[0] - '0'};
    }
    return {AccusationParse::Kind::Unparseable, 0};
}

HangParse parse_hang_vote(const std::string& raw) {
    const std::string t = text::trim(raw);
    if (t == "0") return HangParse::Hang;
    if (t == "X" || t == "x") return HangParse::NoHang;
    return HangParse::Unparseable;
}

std::optional<RevealDecision> parse_reveal(const std::string& raw) {
    const std::string t = text::trim(raw);
    if (t == "X" || t == "x") return RevealDecision::pass();
    if (auto loc = Location::parse(t)) return RevealDecision::guess_location(*loc);
    return std::nullopt;
}

std::optional<FinalVoteParse> parse_final_vote(const std::string& raw) {
    const std::string t = text::trim(raw);
    PlayerId vote = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < '1' || t[i] > '5') continue;
        const bool left_ok = (i == 0) || !std::isalnum(static_cast<unsigned char>(t[i - 1]));
        const bool right_ok =
            (i + 1 == t.size()) || !std::isalnum(static_cast<unsigned char>(t[i + 1]));
        if (left_ok && right_ok) {
            vote = t[i] - '0';
            break;
        }
    }
    if (vote == 0) return std::nullopt;

    FinalVoteParse parsed;
    parsed.vote = vote;
    if (t.size() > 1) {
        // Keep at most three sentences of statement, quote-aware.
        int sentences = 0;
        bool in_quotes = false;
        size_t cut = t.size();
        for (size_t i = 0; i < t.size(); ++i) {
            if (t[i] == '"') in_quotes = !in_quotes;
            if (in_quotes) continue;
            if (t[i] == '.' || t[i] == '!' || t[i] == '?') {
                if (++sentences == 3) {
                    cut = i + 1;
                    break;
                }
            }
        }
        parsed.statement = text::trim(t.substr(0, cut));
    }
    return parsed;
}

std::string sanitize_answer(const std::string& raw) {
    const size_t open = raw.find('"');
    if (open != std::string::npos) {
        const size_t close = raw.find('"', open + 1);
        if (close != std::string::npos) {
            return raw.substr(open + 1, close - open - 1);
        }
    }
    return text::trim(raw);
}

} // namespace spyfall
