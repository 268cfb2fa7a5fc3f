#pragma once

#include "spyfall/agents.hpp"
#include "spyfall/gamelog.hpp"
#include "spyfall/orchestrator.hpp"
#include "spyfall/response_parser.hpp"
#include "spyfall/scripts.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spyfall {

struct Exp1Record {
    Location location;
    std::vector<std::string> attempts; // every raw response, in order
    ResponseClass final_class;         // classification of the last attempt
    std::optional<ParsedQuestion> final_action;
    std::string model_label;
    bool transport_failed = false;
};

// Aggregated first-turn classification counts. Tier counts are per response
// (attempts included) and always sum to total_responses; the flag and
// error-frequency rows are independent tallies, never folded into tiers.
struct Exp1Report {
    int total_responses = 0;
    std::map<ResponseTier, int> tier_counts;
    int keyword_leak = 0;
    int not_game_related = 0; // from manual annotations only

    int error_occurred = 0;      // anything but a clean well-formed tuple
    int rejection_message = 0;   // boilerplate or refusal marker present
    int no_tuple = 0;            // no (n,"question") tuple anywhere
    int no_target = 0;           // no player number extractable at all
    int interaction = 0;         // an answer segment rode along
    int multiple_questions = 0;  // two or more question candidates
    int echo = 0;                // response repeats the prompt

    std::vector<Exp1Record> records;

    int tier_total() const;
};

// Builds the first-turn prompt: player 1, not the spy, empty progress.
std::string exp1_prompt(const ScriptSet& scripts, const Location& location);

// Issues one first-turn question request per location through the retry
// loop, classifying every attempt. Transport failures mark the location
// failed instead of aborting the sweep.
Exp1Report run_exp1(const ScriptSet& scripts, const std::vector<Location>& locations,
                    ResponseSource& source, const QuestionParser& parser,
                    const RetryPolicy& policy, const std::string& model_label = {});

struct CorpusRecord {
    std::string id;
    Location location;
    std::string raw;
};

std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path);

// Manual annotation flags per response id; the only way not_game_related is
// ever set.
using Annotations = std::map<std::string, std::vector<std::string>>;
Annotations load_annotations(const std::filesystem::path& path);

// Offline classification: no remote calls, one classification per record.
Exp1Report classify_corpus(const ScriptSet& scripts, const std::vector<CorpusRecord>& corpus,
                           const QuestionParser& parser, const Annotations& annotations = {});

// Plain-text error-frequency table.
std::string format_exp1_report(const Exp1Report& report);

struct Exp2Summary {
    int games = 0;
    int spy_wins = 0;
    int non_spy_wins = 0;
    int aborted = 0;
    double mean_turns = 0.0; // over completed games
    std::map<OutcomeCause, int> cause_counts;
};

// Runs every configured game (optionally across threads), hands each
// finished log to `sink`, and aggregates. Aborted games are counted, never
// dropped.
Exp2Summary run_exp2(const ScriptSet& scripts, std::vector<GameDriverConfig> games,
                     const std::function<void(const GameLog&)>& sink = {},
                     int concurrency = 1);

std::string format_exp2_summary(const Exp2Summary& summary);

// Monte Carlo estimate of the non-spy win probability under perfectly
// ambiguous play: nobody accuses, the spy never reveals, and the final vote
// is uniform over the other players with revote-on-no-majority. Rounds that
// fail to resolve within 50 revotes are redrawn. Deterministic under `seed`.
double run_baseline(int n_sims, std::uint64_t seed, int players = 5);

} // namespace spyfall
