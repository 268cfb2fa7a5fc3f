#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spyfall/experiments.hpp"
#include "spyfall/response_parser.hpp"
#include "spyfall/scripts.hpp"

#include <filesystem>
#include <random>

using namespace spyfall;

namespace {

const std::filesystem::path kDataDir = SPYFALL_DATA_DIR;

const QuestionParser& parser() {
    static const QuestionParser p(
        BoilerplatePatterns::load(kDataDir / "patterns/boilerplate.txt"));
    return p;
}

const std::vector<CorpusRecord>& quoted_corpus() {
    static const auto corpus = load_corpus(kDataDir / "corpus/gpt35_quoted.json");
    return corpus;
}

const CorpusRecord& record(const std::string& id) {
    for (const auto& r : quoted_corpus()) {
        if (r.id == id) return r;
    }
    REQUIRE_MESSAGE(false, "no corpus record " << id);
    static CorpusRecord dummy;
    return dummy;
}

ParseOutcome extract(const std::string& id) {
    return parser().extract_question(record(id).raw);
}

} // namespace

TEST_CASE("well-formed tuples parse exactly") {
    auto outcome = parser().extract_question(R"((2, "Do you need a ticket to be here?"))");
    CHECK(outcome.cls.tier == ResponseTier::SuccessfulWellFormed);
    REQUIRE(outcome.action.has_value());
    CHECK(outcome.action->target == 2);
    CHECK(outcome.action->text == "Do you need a ticket to be here?");
}

TEST_CASE("the whole clean comparison corpus is well-formed with printed targets") {
    const auto corpus = load_corpus(kDataDir / "corpus/table1_gpt4.json");
    REQUIRE(corpus.size() == 30);
    for (const auto& rec : corpus) {
        INFO(rec.id);
        auto outcome = parser().extract_question(rec.raw);
        CHECK(outcome.cls.tier == ResponseTier::SuccessfulWellFormed);
        REQUIRE(outcome.action.has_value());
        // re-serializing the parsed action reproduces the raw text
        const std::string round_trip =
            "(" + std::to_string(outcome.action->target) + ", \"" + outcome.action->text + "\")";
        CHECK(round_trip == rec.raw);
        // and none of these questions leak their location
        CHECK_FALSE(detect_keyword_leak(outcome.action->text, rec.location));
    }
}

TEST_CASE("golden corpus classifies to the assigned tiers") {
    const std::map<std::string, ResponseTier> expected = {
        {"g35-leak-beach", ResponseTier::SuccessfulWellFormed},
        {"g35-leak-zoo", ResponseTier::SuccessfulWellFormed},
        {"g35-offcontext-warmovie", ResponseTier::SuccessfulWellFormed},
        {"g35-offcontext-roadtrips", ResponseTier::SuccessfulWellFormed},
        {"g35-invalid-hotel", ResponseTier::UsableInvalidFormat},
        {"g35-invalid-zoo", ResponseTier::UsableInvalidFormat},
        {"g35-invalid-request-echo", ResponseTier::UsableInvalidFormat},
        {"g35-superfluous-party", ResponseTier::UsableSuperfluous},
        {"g35-superfluous-moviegenre", ResponseTier::UsableSuperfluous},
        {"g35-multiple-snow", ResponseTier::UsableMultipleAnswers},
        {"g35-multiple-menu", ResponseTier::UsableMultipleAnswers},
        {"g35-refusal-multiplayer", ResponseTier::UnusableRefusal},
        {"g35-refusal-invalid", ResponseTier::UnusableRefusal},
    };
    REQUIRE(quoted_corpus().size() == expected.size());
    for (const auto& rec : quoted_corpus()) {
        INFO(rec.id << ": " << rec.raw);
        auto outcome = parser().extract_question(rec.raw);
        CHECK(outcome.cls.tier == expected.at(rec.id));
        CHECK(is_usable(outcome.cls.tier) == outcome.action.has_value());
    }
}

TEST_CASE("addressed forms convert with the right target") {
    auto hotel = extract("g35-invalid-hotel");
    REQUIRE(hotel.action.has_value());
    CHECK(hotel.action->target == 2);
    CHECK(hotel.action->text == "What is your favorite thing about this place?");

    auto zoo = extract("g35-invalid-zoo");
    REQUIRE(zoo.action.has_value());
    CHECK(zoo.action->target == 2);
    CHECK(zoo.action->text == "what's your favorite animal in the zoo?");

    auto echo_form = extract("g35-invalid-request-echo");
    REQUIRE(echo_form.action.has_value());
    CHECK(echo_form.action->target == 2);
    CHECK(echo_form.action->text.find("Now it's your turn to ask a question") == 0);
}

TEST_CASE("superfluous boilerplate strips down to the embedded question") {
    auto party = extract("g35-superfluous-party");
    REQUIRE(party.action.has_value());
    CHECK(party.action->target == 2);
    CHECK(party.action->text == "What's your favorite thing to eat at a corporate party?");

    auto genre = extract("g35-superfluous-moviegenre");
    REQUIRE(genre.action.has_value());
    CHECK(genre.action->target == 2);
    CHECK(genre.action->text == "What's your favorite movie genre and why?");
}

TEST_CASE("multiple-answer responses keep the first question-like segment") {
    // a fabricated answer follows the tuple: keep the tuple
    auto snow = extract("g35-multiple-snow");
    REQUIRE(snow.action.has_value());
    CHECK(snow.action->target == 2);
    CHECK(snow.action->text == "What's your favorite thing to do in the snow?");
    CHECK(snow.diag.answer_segments == 1);

    // an addressed question precedes a tuple that is really an answer:
    // the naive tuple pick would take the answer, the addressed form must win
    auto menu = extract("g35-multiple-menu");
    REQUIRE(menu.action.has_value());
    CHECK(menu.action->target == 2);
    CHECK(menu.action->text == "What's your favorite item on the menu here?");
    CHECK(menu.diag.question_candidates == 2);
}

TEST_CASE("two tuples in one response keep the first") {
    auto outcome = parser().extract_question(
        "\"(2, \"What subject did you major in while attending this university?\")\" "
        "(3, \"Do you often see families visiting here?\")");
    CHECK(outcome.cls.tier == ResponseTier::UsableMultipleAnswers);
    REQUIRE(outcome.action.has_value());
    CHECK(outcome.action->target == 2);
    CHECK(outcome.action->text ==
          "What subject did you major in while attending this university?");
}

TEST_CASE("refusals yield no action") {
    auto refusal = extract("g35-refusal-multiplayer");
    CHECK(refusal.cls.tier == ResponseTier::UnusableRefusal);
    CHECK_FALSE(refusal.action.has_value());
    CHECK(refusal.diag.refusal_marker_present);

    // texts with no markers and no extractable question are unusable too
    auto blank = parser().extract_question("Everyone seems fine.");
    CHECK(blank.cls.tier == ResponseTier::UnusableRefusal);
    CHECK_FALSE(blank.action.has_value());
}

TEST_CASE("prompt echoes are detected when the prompt is supplied") {
    const ScriptSet set = load_scripts(kDataDir / "scripts");
    const std::string prompt = exp1_prompt(set, Location::require("airplane"));
    // response consisting mostly of a verbatim chunk of the strategy script
    const std::string echoed = set.strategy_text.substr(100, 700) + " That is the game.";

    auto with_prompt = parser().extract_question(echoed, prompt);
    CHECK(with_prompt.cls.tier == ResponseTier::UnusableEcho);
    CHECK(with_prompt.diag.echo_ratio > 0.5);

    // without the prompt there is nothing to compare against
    auto without_prompt = parser().extract_question(echoed);
    CHECK(without_prompt.cls.tier == ResponseTier::UnusableRefusal);

    // short unrelated text is not an echo even with the prompt present
    auto unrelated = parser().extract_question("Everyone seems fine.", prompt);
    CHECK(unrelated.cls.tier == ResponseTier::UnusableRefusal);
    CHECK(unrelated.diag.echo_ratio == 0.0);
}

TEST_CASE("extraction is idempotent on repaired tuples") {
    for (const auto& rec : quoted_corpus()) {
        auto first = parser().extract_question(rec.raw);
        if (!first.action) continue;
        const std::string serialized =
            "(" + std::to_string(first.action->target) + ", \"" + first.action->text + "\")";
        auto second = parser().extract_question(serialized);
        INFO(rec.id << " -> " << serialized);
        CHECK(second.cls.tier == ResponseTier::SuccessfulWellFormed);
        REQUIRE(second.action.has_value());
        CHECK(*second.action == *first.action);
    }
}

TEST_CASE("the classifier is total and repairs soundly over fuzzed text") {
    std::mt19937_64 rng(20230607);
    const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ,.?!:;()\"'";
    std::uniform_int_distribution<size_t> pick_char(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> pick_len(1, 240);
    for (int i = 0; i < 3000; ++i) {
        std::string raw;
        const int len = pick_len(rng);
        for (int j = 0; j < len; ++j) raw.push_back(alphabet[pick_char(rng)]);
        auto outcome = parser().extract_question(raw);
        // an action exactly on usable tiers
        CHECK(is_usable(outcome.cls.tier) == outcome.action.has_value());
        if (outcome.action) {
            CHECK(outcome.action->target >= 1);
            CHECK(outcome.action->target <= 5);
            CHECK_FALSE(outcome.action->text.empty());
            // repair soundness: the re-serialized action is well-formed
            const std::string serialized = "(" + std::to_string(outcome.action->target) +
                                           ", \"" + outcome.action->text + "\")";
            auto again = parser().extract_question(serialized);
            CHECK(again.cls.tier == ResponseTier::SuccessfulWellFormed);
        }
    }
}

TEST_CASE("keyword leaks match whole phrases, case-insensitively") {
    const Location beach = Location::require("beach");
    const Location airplane = Location::require("airplane");
    const Location party = Location::require("corporate party");
    const Location zoo = Location::require("zoo");

    CHECK(detect_keyword_leak("What is your favorite thing to do at the beach?", beach));
    CHECK(detect_keyword_leak("What is your favorite thing to do at the BEACH?", beach));
    CHECK_FALSE(detect_keyword_leak("Do you need a ticket to be here?", airplane));
    CHECK(detect_keyword_leak("What's your favorite thing to eat at a corporate party?", party));
    CHECK(detect_keyword_leak("what's your favorite animal in the zoo?", zoo));
    // substrings inside larger words do not count
    CHECK_FALSE(detect_keyword_leak("Do you enjoy the beaches around here?", beach));
    // multi-word locations match only as the full phrase
    CHECK_FALSE(detect_keyword_leak("Do you attend the party often?", party));
}

TEST_CASE("leak detection is symmetric under case") {
    const std::vector<std::string> samples = {
        "What is your favorite thing to do at the beach?",
        "Is the Corporate Party fun?",
        "Do you come here by AIRPLANE or train?",
        "No location words at all.",
    };
    for (const auto& q : samples) {
        for (auto name : kCanonicalLocations) {
            const Location loc = Location::require(name);
            std::string lower;
            for (char c : q) {
                lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            }
            CHECK(detect_keyword_leak(q, loc) == detect_keyword_leak(lower, loc));
        }
    }
}

TEST_CASE("accusation responses parse strictly") {
    CHECK(parse_accusation("X").kind == AccusationParse::Kind::NoAccusation);
    CHECK(parse_accusation(" x ").kind == AccusationParse::Kind::NoAccusation);
    auto named = parse_accusation("3");
    CHECK(named.kind == AccusationParse::Kind::Name);
    CHECK(named.target == 3);
    CHECK(parse_accusation("I accuse player 3").kind == AccusationParse::Kind::Unparseable);
    CHECK(parse_accusation("7").kind == AccusationParse::Kind::Unparseable);
    CHECK(parse_accusation("0").kind == AccusationParse::Kind::Unparseable);
}

TEST_CASE("hang ballots parse strictly") {
    CHECK(parse_hang_vote("0") == HangParse::Hang);
    CHECK(parse_hang_vote("X") == HangParse::NoHang);
    CHECK(parse_hang_vote(" x\n") == HangParse::NoHang);
    CHECK(parse_hang_vote("yes") == HangParse::Unparseable);
    CHECK(parse_hang_vote("1") == HangParse::Unparseable);
}

TEST_CASE("reveal responses parse to pass or a canonical guess") {
    auto pass = parse_reveal("X");
    REQUIRE(pass.has_value());
    CHECK_FALSE(pass->is_guess());

    auto guess = parse_reveal("carnival");
    REQUIRE(guess.has_value());
    REQUIRE(guess->is_guess());
    CHECK(guess->guess->name() == "carnival");

    auto capitalized = parse_reveal("Carnival");
    REQUIRE(capitalized.has_value());
    CHECK(capitalized->guess->name() == "carnival");

    CHECK_FALSE(parse_reveal("moon base").has_value());
    CHECK_FALSE(parse_reveal("the carnival").has_value());
}

TEST_CASE("final votes take the first standalone digit plus a bounded statement") {
    auto bare = parse_final_vote("2");
    REQUIRE(bare.has_value());
    CHECK(bare->vote == 2);
    CHECK_FALSE(bare->statement.has_value());

    auto with_statement = parse_final_vote(
        "I vote for player 4. Their answers were vague. They dodged the food question.");
    REQUIRE(with_statement.has_value());
    CHECK(with_statement->vote == 4);
    REQUIRE(with_statement->statement.has_value());
    CHECK(*with_statement->statement ==
          "I vote for player 4. Their answers were vague. They dodged the food question.");

    auto truncated = parse_final_vote(
        "I vote for player 4. First reason. Second reason. Third reason is dropped.");
    REQUIRE(truncated.has_value());
    CHECK(*truncated->statement == "I vote for player 4. First reason. Second reason.");

    CHECK_FALSE(parse_final_vote("Everyone seems fine.").has_value());
    CHECK_FALSE(parse_final_vote("").has_value());
}

TEST_CASE("answers keep the first quoted span or fall back to trimmed text") {
    CHECK(sanitize_answer("\"It's definitely more on the exciting side.\"") ==
          "It's definitely more on the exciting side.");
    CHECK(sanitize_answer("We mostly eat preserved foods.") == "We mostly eat preserved foods.");
    CHECK(sanitize_answer("  spaced out  ") == "spaced out");
    CHECK(sanitize_answer("Sure! \"massage, facial treatments, and sauna.\"") ==
          "massage, facial treatments, and sauna.");
    CHECK(sanitize_answer("\"unterminated") == "\"unterminated");
}

TEST_CASE("boilerplate patterns load from the data file") {
    auto patterns = BoilerplatePatterns::load(kDataDir / "patterns/boilerplate.txt");
    CHECK(patterns.patterns().size() >= 6);
    CHECK(patterns.any_in("as an AI language model, I cannot"));
    CHECK(patterns.any_in("I'm sorry about that"));
    CHECK_FALSE(patterns.any_in("Do you need a ticket to be here?"));
}
