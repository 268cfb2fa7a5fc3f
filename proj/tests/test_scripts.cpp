#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spyfall/errors.hpp"
#include "spyfall/scripts.hpp"
#include "spyfall/text.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace spyfall;

namespace {

const std::filesystem::path kDataDir = SPYFALL_DATA_DIR;

const ScriptSet& scripts() {
    static const ScriptSet set = load_scripts(kDataDir / "scripts");
    return set;
}

// Whoever edits the script files must update these pins deliberately:
// replay output is byte-coupled to the shipped texts.
const std::map<std::string, std::uint64_t> kPinnedChecksums = {
    {"rule.txt", 0x49fe146a929cd8bcULL},
    {"strategy.txt", 0x50c5f14296d867a6ULL},
    {"requests/ask_question.txt", 0x05956430ebfa4818ULL},
    {"requests/answer_question.txt", 0x6554a199faa0c49aULL},
    {"requests/accusation_poll.txt", 0xbe69ca7ebfab857eULL},
    {"requests/hang_vote.txt", 0xfeb489187c09e98eULL},
    {"requests/reveal_window.txt", 0x4575e23457390944ULL},
    {"requests/final_vote.txt", 0x0a2ed6bc046614ddULL},
};

TurnRecord make_turn(int n, PlayerId asker, PlayerId target, std::string q, std::string a) {
    TurnRecord rec;
    rec.turn_no = n;
    rec.asker = asker;
    rec.target = target;
    rec.question = std::move(q);
    rec.answer = std::move(a);
    rec.poll_recorded = true;
    for (PlayerId p = 1; p <= 5; ++p) rec.accusations[p] = std::nullopt;
    rec.reveal = RevealDecision::pass();
    return rec;
}

// The archived carnival game (gamecode ena5005), narration typed out in
// full. Every punctuation quirk is intentional.
const std::string kCarnivalNarration =
    "In the 1th question, player 1 asked player 2 the following."
    "Do you think the atmosphere here is relaxing or exciting?"
    " To this question, player 2 responded with the following."
    "\"It's definitely more on the exciting side.\""
    " At the end of this question, no one accused anyone else of being a spy."
    " The spy did not reveal their identity."
    "In the 2th question, player 2 asked player 3 the following."
    "What kind of food options can we find at this location?"
    " To this question, player 3 responded with the following."
    "\"There are a variety of food options here, including fried treats, cotton candy, and "
    "popcorn.\""
    " At the end of this question, no one accused anyone else of being a spy."
    " The spy did not reveal their identity."
    "In the 3th question, player 3 asked player 4 the following."
    "What type of attractions or entertainment can we find here?"
    " To this question, player 4 responded with the following."
    "\"There are thrilling rides, fun games, and amusing performances that cater to people of "
    "all ages.\""
    " At the end of this question, no one accused anyone else of being a spy."
    "Player 1 reveals that they are the spy, and they guessed the location. The spy wins.";

std::vector<TurnRecord> carnival_turns() {
    std::vector<TurnRecord> turns;
    turns.push_back(make_turn(1, 1, 2, "Do you think the atmosphere here is relaxing or exciting?",
                              "It's definitely more on the exciting side."));
    turns.push_back(make_turn(2, 2, 3, "What kind of food options can we find at this location?",
                              "There are a variety of food options here, including fried treats, "
                              "cotton candy, and popcorn."));
    turns.push_back(make_turn(3, 3, 4, "What type of attractions or entertainment can we find here?",
                              "There are thrilling rides, fun games, and amusing performances "
                              "that cater to people of all ages."));
    turns.back().reveal = RevealDecision::guess_location(Location::require("carnival"));
    return turns;
}

} // namespace

TEST_CASE("script files load verbatim with pinned checksums") {
    const ScriptSet& set = scripts();
    CHECK(set.rule_text.find("There are five players in total") != std::string::npos);
    CHECK(set.rule_text.find("other other other") != std::string::npos); // shipped typo stays
    CHECK(set.strategy_text.find("keep their conversations vague so that the spy doesn't notice "
                                 "the location") != std::string::npos);
    REQUIRE(set.request_templates.size() == 6);
    for (const auto& [file, checksum] : kPinnedChecksums) {
        INFO(file);
        REQUIRE(set.checksums.count(file) == 1);
        CHECK(set.checksums.at(file) == checksum);
    }
}

TEST_CASE("the location list in the rule text matches the canonical list") {
    const std::string& rule = scripts().rule_text;
    const size_t open = rule.rfind('[');
    const size_t close = rule.rfind(']');
    REQUIRE(open != std::string::npos);
    REQUIRE(close > open);
    std::string list = rule.substr(open + 1, close - open - 1);
    std::vector<std::string> names;
    size_t pos = 0;
    while (pos < list.size()) {
        size_t comma = list.find(',', pos);
        if (comma == std::string::npos) comma = list.size();
        names.push_back(text::trim(list.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    REQUIRE(names.size() == kCanonicalLocations.size());
    for (size_t i = 0; i < names.size(); ++i) {
        CHECK(names[i] == kCanonicalLocations[i]);
    }
}

TEST_CASE("loading from a directory with a missing template fails loudly") {
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "spyfall_scripts_missing";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "requests");
    fs::copy_file(kDataDir / "scripts/rule.txt", tmp / "rule.txt");
    fs::copy_file(kDataDir / "scripts/strategy.txt", tmp / "strategy.txt");
    for (const char* stem : {"ask_question", "answer_question", "accusation_poll",
                             "reveal_window", "final_vote"}) { // hang_vote left out
        fs::copy_file(kDataDir / ("scripts/requests/" + std::string(stem) + ".txt"),
                      tmp / "requests" / (std::string(stem) + ".txt"));
    }
    CHECK_THROWS_WITH_AS(load_scripts(tmp),
                         doctest::Contains("hang_vote"), LoadError);
    fs::remove_all(tmp);
}

TEST_CASE("preamble forms") {
    RolePreamble normal{1, false, Location::require("airplane")};
    const std::string text = render_preamble(normal);
    CHECK(text == "You are player 1. You're not a spy; the location is 'airplane'.");

    RolePreamble spy{5, true, std::nullopt};
    const std::string spy_text = render_preamble(spy);
    CHECK(spy_text == "You are player 5. You're the spy.");
    CHECK(spy_text.find("location") == std::string::npos);

    CHECK_THROWS_AS(render_preamble(RolePreamble{2, false, std::nullopt}), ConfigError);
    CHECK_THROWS_AS(render_preamble(RolePreamble{2, true, Location::require("zoo")}), ConfigError);
}

TEST_CASE("progress narration reproduces the archived carnival game byte for byte") {
    const auto turns = carnival_turns();

    SUBCASE("empty transcript renders nothing") {
        CHECK(render_progress({}) == "");
    }
    SUBCASE("first turn block") {
        const std::string one = render_progress(std::span(turns.data(), 1));
        CHECK(one ==
              "In the 1th question, player 1 asked player 2 the following."
              "Do you think the atmosphere here is relaxing or exciting?"
              " To this question, player 2 responded with the following."
              "\"It's definitely more on the exciting side.\""
              " At the end of this question, no one accused anyone else of being a spy."
              " The spy did not reveal their identity.");
    }
    SUBCASE("blocks concatenate with no separator") {
        const std::string two = render_progress(std::span(turns.data(), 2));
        CHECK(two.find("identity.In the 2th question") != std::string::npos);
    }
    SUBCASE("full game plus terminal sentence") {
        const std::string narration =
            render_progress(turns) +
            terminal_sentence(GameOutcome{Winner::Spy, OutcomeCause::CorrectGuess, 1});
        CHECK(narration == kCarnivalNarration);
    }
    SUBCASE("a pending unanswered question renders nothing") {
        auto partial = carnival_turns();
        TurnRecord open;
        open.turn_no = 4;
        open.asker = 4;
        open.target = 5;
        open.question = "pending?";
        partial.push_back(open);
        CHECK(render_progress(partial) ==
              render_progress(std::span(partial.data(), 3)));
    }
}

TEST_CASE("ordinals keep the th suffix for every turn number") {
    std::vector<TurnRecord> turns;
    turns.push_back(make_turn(1, 1, 2, "q?", "a"));
    turns.push_back(make_turn(2, 2, 3, "q?", "a"));
    turns.push_back(make_turn(3, 3, 4, "q?", "a"));
    const std::string narration = render_progress(turns);
    CHECK(narration.find("In the 1th question") != std::string::npos);
    CHECK(narration.find("In the 2th question") != std::string::npos);
    CHECK(narration.find("In the 3th question") != std::string::npos);
    CHECK(narration.find("1st") == std::string::npos);
}

TEST_CASE("accusation and failed-vote narration") {
    auto rec = make_turn(1, 1, 2, "q?", "a");
    rec.accusations[3] = 5;
    rec.accusation = std::make_pair(3, 5);
    HangVoteRecord vote;
    vote.accuser = 3;
    vote.accused = 5;
    vote.hanged = false;
    rec.hang_vote = vote;
    const std::string narration = render_progress(std::span(&rec, 1));
    CHECK(narration.find(" At the end of this question, player 3 accused player 5 of being a "
                         "spy.") != std::string::npos);
    CHECK(narration.find(" A vote was held on player 5, but the player was not hanged.") !=
          std::string::npos);
    CHECK(narration.find("no one accused") == std::string::npos);
}

TEST_CASE("request rendering fills the per-phase fields") {
    const ScriptSet& set = scripts();

    const std::string ask = render_request(set, RequestKind::AskQuestion, {});
    CHECK(ask.find("(n_player,\"question\")") != std::string::npos);
    CHECK(ask.rfind("Please write your response in the form (n_player,\"question\")") ==
          ask.size() - std::string("Please write your response in the form "
                                   "(n_player,\"question\")").size());

    RequestContext answer_ctx;
    answer_ctx.turn_no = 1;
    answer_ctx.asker = 1;
    answer_ctx.question = "Do you think the atmosphere here is relaxing or exciting?";
    const std::string answer = render_request(set, RequestKind::AnswerQuestion, answer_ctx);
    CHECK(answer.find("In the 1th question, player 1 asked you the following."
                      "Do you think the atmosphere here is relaxing or exciting?") !=
          std::string::npos);
    CHECK(answer.find("inside the \"\" mark.") != std::string::npos);

    const std::string poll = render_request(set, RequestKind::AccusationPoll, {});
    CHECK(poll.find("write the number of the player you want to name, otherwise write an X") !=
          std::string::npos);
    CHECK(poll.find("Please only write numbers or Xs in your response.") != std::string::npos);

    RequestContext hang_ctx;
    hang_ctx.accuser = 3;
    hang_ctx.accused = 5;
    const std::string hang = render_request(set, RequestKind::HangVote, hang_ctx);
    CHECK(hang.find("player 3 accused player 5 of being a spy") != std::string::npos);
    CHECK(hang.find("please enter 0. If not, please enter X.") != std::string::npos);

    const std::string reveal = render_request(set, RequestKind::RevealWindow, {});
    CHECK(reveal.find("Please only answer with a place name or X.") != std::string::npos);

    const std::string final_vote = render_request(set, RequestKind::FinalVote, {});
    CHECK(final_vote.find("three-sentence statement") != std::string::npos);

    // context/kind mismatch
    CHECK_THROWS_AS(render_request(set, RequestKind::AnswerQuestion, {}), TemplateError);
    CHECK_THROWS_AS(render_request(set, RequestKind::HangVote, {}), TemplateError);
}

TEST_CASE("prompt assembly is pure and matches the documented layout") {
    const ScriptSet& set = scripts();
    RolePreamble preamble{1, false, Location::require("airplane")};
    const std::string request = render_request(set, RequestKind::AskQuestion, {});

    const std::string a = assemble_prompt(set, render_preamble(preamble), "", request);
    const std::string b = assemble_prompt(set, render_preamble(preamble), "", request);
    CHECK(a == b);

    const std::string expected = set.rule_text + "\n\n" + set.strategy_text + "\n\n" +
                                 "You are player 1. You're not a spy; the location is "
                                 "'airplane'." +
                                 "\n\n" + request;
    CHECK(a == expected);

    // with progress, the narration slots between preamble and request
    const std::string progress = render_progress(carnival_turns());
    const std::string with_progress =
        assemble_prompt(set, render_preamble(preamble), progress, request);
    CHECK(with_progress.find(progress + "\n\n" + request) != std::string::npos);
}

TEST_CASE("terminal sentences cover all six causes") {
    CHECK(terminal_sentence({Winner::Spy, OutcomeCause::CorrectGuess, 1}) ==
          "Player 1 reveals that they are the spy, and they guessed the location. The spy wins.");
    CHECK(terminal_sentence({Winner::NonSpies, OutcomeCause::WrongGuess, 4}) ==
          "Player 4 reveals that they are the spy, and they failed to guess the location. "
          "The not-spy players win.");
    CHECK(terminal_sentence({Winner::NonSpies, OutcomeCause::HangedSpy, 5}) ==
          "Player 5 was hanged, and they were the spy. The not-spy players win.");
    CHECK(terminal_sentence({Winner::Spy, OutcomeCause::HangedNonSpy, 2}) ==
          "Player 2 was hanged, but they were not the spy. The spy wins.");
    CHECK(terminal_sentence({Winner::NonSpies, OutcomeCause::FinalVoteCorrect, 3}) ==
          "In the final vote, player 3 received a majority of the votes, and they were the spy. "
          "The not-spy players win.");
    CHECK(terminal_sentence({Winner::Spy, OutcomeCause::FinalVoteWrong, 3}) ==
          "In the final vote, player 3 received a majority of the votes, but they were not the "
          "spy. The spy wins.");
}
