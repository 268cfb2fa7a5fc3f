#include "spyfall/experiments.hpp"

#include "spyfall/errors.hpp"
#include "spyfall/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace spyfall {

using nlohmann::json;

namespace {

void tally_attempt(Exp1Report& report, const ParseOutcome& outcome, ResponseTier tier,
                   bool leak, bool not_game_related) {
    ++report.total_responses;
    ++report.tier_counts[tier];
    if (leak) ++report.keyword_leak;
    if (not_game_related) ++report.not_game_related;

    if (tier != ResponseTier::SuccessfulWellFormed) ++report.error_occurred;
    if (outcome.diag.boilerplate_present || outcome.diag.refusal_marker_present) {
        ++report.rejection_message;
    }
    if (outcome.diag.tuple_count == 0) ++report.no_tuple;
    if (!outcome.action) ++report.no_target;
    if (outcome.diag.answer_segments > 0) ++report.interaction;
    if (outcome.diag.question_candidates >= 2) ++report.multiple_questions;
    if (tier == ResponseTier::UnusableEcho) ++report.echo;
}

ResponseTier upgraded_tier(ResponseTier tier, bool leak, bool not_game_related) {
    // A well-formed question that leaks the location or is annotated as
    // off-game content is successful in format only.
    if (tier == ResponseTier::SuccessfulWellFormed && (leak || not_game_related)) {
        return ResponseTier::SuccessfulOffContext;
    }
    return tier;
}

} // namespace

int Exp1Report::tier_total() const {
    int total = 0;
    for (const auto& [tier, count] : tier_counts) total += count;
    return total;
}

std::string exp1_prompt(const ScriptSet& scripts, const Location& location) {
    RolePreamble preamble;
    preamble.player = 1;
    preamble.is_spy = false;
    preamble.location = location;
    return assemble_prompt(scripts, render_preamble(preamble), "",
                           render_request(scripts, RequestKind::AskQuestion, {}));
}

Exp1Report run_exp1(const ScriptSet& scripts, const std::vector<Location>& locations,
                    ResponseSource& source, const QuestionParser& parser,
                    const RetryPolicy& policy, const std::string& model_label) {
    if (locations.empty()) throw ConfigError("run_exp1 needs at least one location");
    Exp1Report report;
    for (const Location& location : locations) {
        Exp1Record record;
        record.location = location;
        record.model_label = model_label;
        const std::string prompt = exp1_prompt(scripts, location);

        const int attempts_allowed = 1 + std::max(0, policy.max_retries);
        for (int attempt = 0; attempt < attempts_allowed; ++attempt) {
            std::string raw;
            try {
                raw = source.respond(prompt);
            } catch (const TransportError&) {
                record.transport_failed = true;
                break;
            }
            ParseOutcome outcome = parser.extract_question(raw, prompt);
            const bool leak =
                outcome.action && detect_keyword_leak(outcome.action->text, location);
            const ResponseTier tier = upgraded_tier(outcome.cls.tier, leak, false);
            tally_attempt(report, outcome, tier, leak, false);

            record.attempts.push_back(raw);
            record.final_class = ResponseClass{tier, leak, false};
            record.final_action = outcome.action;
            if (outcome.action) break;
        }
        report.records.push_back(std::move(record));
    }
    return report;
}

std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw LoadError(path.string() + ": corpus must be a JSON array");
    std::vector<CorpusRecord> corpus;
    for (const auto& entry : doc) {
        CorpusRecord record;
        try {
            record.id = entry.at("id").get<std::string>();
            record.location = Location::require(entry.at("location").get<std::string>());
            record.raw = entry.at("raw").get<std::string>();
        } catch (const json::exception& e) {
            throw LoadError(path.string() + ": bad corpus record: " + e.what());
        }
        if (record.raw.empty()) throw LoadError(path.string() + ": empty raw text for " + record.id);
        corpus.push_back(std::move(record));
    }
    return corpus;
}

Annotations load_annotations(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
    Annotations annotations;
    for (const auto& [id, flags] : doc.items()) {
        annotations[id] = flags.get<std::vector<std::string>>();
    }
    return annotations;
}

Exp1Report classify_corpus(const ScriptSet& scripts, const std::vector<CorpusRecord>& corpus,
                           const QuestionParser& parser, const Annotations& annotations) {
    Exp1Report report;
    for (const CorpusRecord& record : corpus) {
        const std::string prompt = exp1_prompt(scripts, record.location);
        ParseOutcome outcome = parser.extract_question(record.raw, prompt);

        const bool leak =
            outcome.action && detect_keyword_leak(outcome.action->text, record.location);
        bool not_game_related = false;
        if (auto it = annotations.find(record.id); it != annotations.end()) {
            not_game_related = std::find(it->second.begin(), it->second.end(),
                                         "NotGameRelated") != it->second.end();
        }
        const ResponseTier tier = upgraded_tier(outcome.cls.tier, leak, not_game_related);
        tally_attempt(report, outcome, tier, leak, not_game_related);

        Exp1Record rec;
        rec.location = record.location;
        rec.attempts.push_back(record.raw);
        rec.final_class = ResponseClass{tier, leak, not_game_related};
        rec.final_action = outcome.action;
        rec.model_label = record.id;
        report.records.push_back(std::move(rec));
    }
    return report;
}

std::string format_exp1_report(const Exp1Report& report) {
    std::ostringstream out;
    auto row = [&out](const std::string& label, int count) {
        out << label;
        for (size_t i = label.size(); i < 48; ++i) out << ' ';
        out << count << "\n";
    };
    row("total responses", report.total_responses);
    row("responses with errors", report.error_occurred);
    row("no question for any player", report.no_target);
    row("not game-related (annotated)", report.not_game_related);
    row("location keyword stated directly", report.keyword_leak);
    row("rejection message included", report.rejection_message);
    row("missing the (n, \"question\") tuple", report.no_tuple);
    row("question and answer within one response", report.interaction);
    row("multiple questions in one response", report.multiple_questions);
    row("prompt echoed back", report.echo);
    out << "\n";
    static constexpr ResponseTier kTiers[] = {
        ResponseTier::SuccessfulWellFormed,  ResponseTier::SuccessfulOffContext,
        ResponseTier::UsableInvalidFormat,   ResponseTier::UsableSuperfluous,
        ResponseTier::UsableMultipleAnswers, ResponseTier::UnusableRefusal,
        ResponseTier::UnusableEcho,
    };
    for (ResponseTier tier : kTiers) {
        auto it = report.tier_counts.find(tier);
        row(std::string("tier ") + to_string(tier), it == report.tier_counts.end() ? 0 : it->second);
    }
    return out.str();
}

Exp2Summary run_exp2(const ScriptSet& scripts, std::vector<GameDriverConfig> games,
                     const std::function<void(const GameLog&)>& sink, int concurrency) {
    if (games.empty()) throw ConfigError("run_exp2 needs at least one game");
    concurrency = std::clamp(concurrency, 1, static_cast<int>(games.size()));

    std::vector<RunResult> results(games.size());
    std::atomic<size_t> next{0};
    std::mutex sink_mutex;

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= games.size()) return;
            results[i] = run_game(scripts, std::move(games[i]));
            if (sink) {
                std::lock_guard<std::mutex> lock(sink_mutex);
                sink(results[i].log);
            }
        }
    };
    if (concurrency == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<size_t>(concurrency));
        for (int i = 0; i < concurrency; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    Exp2Summary summary;
    double turn_sum = 0;
    int completed = 0;
    for (const RunResult& result : results) {
        ++summary.games;
        if (result.log.aborted || !result.outcome) {
            ++summary.aborted;
            continue;
        }
        ++completed;
        turn_sum += result.log.total_turn;
        ++summary.cause_counts[result.outcome->cause];
        if (result.outcome->winner == Winner::Spy) {
            ++summary.spy_wins;
        } else {
            ++summary.non_spy_wins;
        }
    }
    summary.mean_turns = completed > 0 ? turn_sum / completed : 0.0;
    return summary;
}

std::string format_exp2_summary(const Exp2Summary& summary) {
    std::ostringstream out;
    out << "games: " << summary.games << "\n"
        << "spy wins: " << summary.spy_wins << "\n"
        << "non-spy wins: " << summary.non_spy_wins << "\n"
        << "aborted: " << summary.aborted << "\n"
        << "mean turns: " << summary.mean_turns << "\n";
    for (const auto& [cause, count] : summary.cause_counts) {
        out << "cause " << to_string(cause) << ": " << count << "\n";
    }
    return out.str();
}

double run_baseline(int n_sims, std::uint64_t seed, int players) {
    if (n_sims < 1) throw ConfigError("n_sims must be >= 1");
    if (players < 3) throw ConfigError("baseline needs at least 3 players");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> spy_dist(1, players);
    std::uniform_int_distribution<int> other_dist(1, players - 1);
    const int majority = players / 2 + 1;
    constexpr int kRevoteCap = 50;

    std::vector<int> tally(static_cast<size_t>(players) + 1, 0);
    int identified = 0;
    for (int sim = 0; sim < n_sims; ++sim) {
        const int spy = spy_dist(rng);
        int resolved = 0;
        while (resolved == 0) { // an unresolved cap is redrawn
            for (int round = 0; round < kRevoteCap && resolved == 0; ++round) {
                std::fill(tally.begin(), tally.end(), 0);
                for (int voter = 1; voter <= players; ++voter) {
                    int pick = other_dist(rng);
                    if (pick >= voter) ++pick;
                    ++tally[static_cast<size_t>(pick)];
                }
                for (int p = 1; p <= players; ++p) {
                    if (tally[static_cast<size_t>(p)] >= majority) {
                        resolved = p;
                        break;
                    }
                }
            }
        }
        if (resolved == spy) ++identified;
    }
    return static_cast<double>(identified) / n_sims;
}

} // namespace spyfall
