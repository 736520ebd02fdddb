#include "cueharvest/cli.hpp"

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "cueharvest/core.hpp"
#include "cueharvest/cue_classifier.hpp"
#include "cueharvest/matcher.hpp"
#include "cueharvest/pipeline.hpp"
#include "cueharvest/sequencer.hpp"
#include "cueharvest/sources.hpp"
#include "cueharvest/stats.hpp"
#include "cueharvest/synth.hpp"

namespace cueharvest {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOperational = 1;
constexpr int kExitUsage = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    return out;
}

std::vector<std::string> split_tags(const std::string& csv) {
    std::vector<std::string> tags;
    std::stringstream in(csv);
    std::string tag;
    while (std::getline(in, tag, ',')) {
        const std::size_t b = tag.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const std::size_t e = tag.find_last_not_of(" \t");
        tags.push_back(tag.substr(b, e - b + 1));
    }
    return tags;
}

std::vector<std::string> load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open lexicon file: " + path);
    }
    std::vector<std::string> lexicon;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const std::size_t e = line.find_last_not_of(" \t\r");
        lexicon.push_back(line.substr(b, e - b + 1));
    }
    return lexicon;
}

struct HarvestArgs {
    std::string source_path;
    std::string query;
    bool query_given = false;
    std::string lang;
    std::size_t max_thread_len = 100;
    std::size_t max_candidates = 0;
    std::string out_path;
    std::string report_path;
    std::string since;
    std::string until;
    int workers = 1;
    bool no_dedup = false;
};

int do_harvest(const HarvestArgs& args) {
    const SourceConfig source_config = load_source_config(args.source_path);
    HarvestConfig config;
    // an explicit flag beats the source config's query
    config.query = args.query_given ? args.query : source_config.query;
    if (!args.lang.empty()) config.lang_filter = args.lang;
    config.max_thread_length = args.max_thread_len;
    config.max_candidates = args.max_candidates;
    config.dedup = !args.no_dedup;
    config.workers = args.workers;
    if (!args.since.empty() || !args.until.empty()) {
        const auto from = args.since.empty() ? std::optional<std::int64_t>(0)
                                             : parse_rfc3339(args.since);
        const auto to = args.until.empty()
                            ? std::optional<std::int64_t>(std::numeric_limits<std::int64_t>::max())
                            : parse_rfc3339(args.until);
        if (!from || !to) {
            throw std::runtime_error("--since/--until must be RFC 3339 timestamps");
        }
        config.seed_window = {{*from, *to}};
    }

    const std::unique_ptr<ConversationSource> source = open_source(source_config);
    const HarvestResult result = harvest(*source, config);

    std::ofstream out = open_output(args.out_path);
    write_instances_jsonl(result.instances, out);
    std::cout << result.report.to_text();
    if (!args.report_path.empty()) {
        std::ofstream report_out = open_output(args.report_path);
        report_out << result.report.to_json().dump(2) << '\n';
    }
    return kExitOk;
}

int do_classify(const std::string& text) {
    const CueDecision decision = classify_cue(text);
    if (decision.person == PersonClass::Unknown) {
        std::cout << "person=unknown reason=" << to_string(decision.reason) << '\n';
    } else {
        std::cout << "person=" << person_number(decision.person)
                  << " reason=" << to_string(decision.reason);
        if (decision.matched_pronoun) std::cout << " pronoun=" << *decision.matched_pronoun;
        std::cout << '\n';
    }
    return kExitOk;
}

int do_match(const std::string& sequence, int person_num) {
    const std::optional<RoleAssignment> roles =
        match_roles(sequence, person_from_number(person_num));
    if (!roles) {
        std::cout << "NOMATCH\n";
        return kExitOk;
    }
    std::cout << "sarc=" << roles->sarcastic_index;
    if (roles->oblivious_index) std::cout << " obl=" << *roles->oblivious_index;
    if (roles->eliciting_index) std::cout << " eli=" << *roles->eliciting_index;
    std::cout << '\n';
    return kExitOk;
}

int do_negatives(const std::string& source_path, std::size_t count,
                 const std::string& lexicon_path, const std::string& lang,
                 const std::string& out_path) {
    const std::vector<std::string> lexicon =
        lexicon_path.empty() ? default_negative_lexicon() : load_lexicon(lexicon_path);
    const SourceConfig source_config = load_source_config(source_path);
    const std::unique_ptr<ConversationSource> source = open_source(source_config);
    const std::vector<LabeledInstance> negatives =
        sample_negatives(*source, count, lexicon, lang);
    std::ofstream out = open_output(out_path);
    write_instances_jsonl(negatives, out);
    std::cout << "sampled: " << negatives.size() << '\n';
    return kExitOk;
}

int do_hashtags(const std::string& source_path, const std::string& tags_csv,
                const std::string& out_path) {
    const std::vector<std::string> tags = split_tags(tags_csv);
    if (tags.empty()) {
        throw std::runtime_error("--tags must name at least one hashtag");
    }
    const SourceConfig source_config = load_source_config(source_path);
    const std::unique_ptr<ConversationSource> source = open_source(source_config);
    const HashtagResult result = hashtag_harvest(*source, tags);
    std::ofstream out = open_output(out_path);
    for (const Tweet& t : result.tweets) {
        out << tweet_to_json(t).dump() << '\n';
    }
    std::cout << "matched: " << result.report.matched << '\n'
              << "span_seconds: " << result.report.span_seconds << '\n'
              << "tweets_per_day: " << result.report.tweets_per_day << '\n';
    return kExitOk;
}

int do_stats(const std::string& in_path, const std::string& format, std::size_t top_k) {
    std::ifstream in(in_path);
    if (!in) {
        throw std::runtime_error("cannot open dataset: " + in_path);
    }
    const std::vector<LabeledInstance> instances = read_instances_jsonl(in);
    StatsAccumulator stats;
    for (const LabeledInstance& instance : instances) stats.add(instance);
    if (format == "json") {
        std::cout << stats_to_json(stats, top_k).dump(2) << '\n';
    } else {
        std::cout << render_stats_text(stats, top_k);
    }
    return kExitOk;
}

int do_synth(const std::string& mix_path, std::uint64_t seed, double ambiguous,
             const std::string& out_path, const std::string& truth_path) {
    const std::vector<MixEntry> mix = load_mix_file(mix_path);
    const SynthCorpus corpus = generate_corpus(mix, ambiguous, seed);
    std::ofstream corpus_out = open_output(out_path);
    write_corpus_jsonl(corpus, corpus_out);
    std::ofstream truth_out = open_output(truth_path);
    write_truth_jsonl(corpus, truth_out);
    std::cout << "threads: " << corpus.threads.size() << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"harvests sarcasm datasets from conversation-thread cue tweets"};
    app.require_subcommand(1);

    HarvestArgs harvest_args;
    CLI::App* harvest_cmd =
        app.add_subcommand("harvest", "run the full cue -> thread -> roles pipeline");
    harvest_cmd->add_option("--source", harvest_args.source_path, "source config file")
        ->required();
    harvest_cmd->add_option("--query", harvest_args.query, "cue search phrase");
    harvest_cmd->add_option("--lang", harvest_args.lang, "ISO 639-1 language filter");
    harvest_cmd->add_option("--max-thread-len", harvest_args.max_thread_len,
                            "discard threads longer than this")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    harvest_cmd->add_option("--max-candidates", harvest_args.max_candidates,
                            "stop fetching after this many candidates (0 = all)");
    harvest_cmd->add_option("--out", harvest_args.out_path, "dataset output file (JSON Lines)")
        ->required();
    harvest_cmd->add_option("--report", harvest_args.report_path, "also write the report as JSON");
    harvest_cmd->add_option("--since", harvest_args.since, "only cues at or after this time");
    harvest_cmd->add_option("--until", harvest_args.until, "only cues at or before this time");
    harvest_cmd->add_option("--workers", harvest_args.workers, "worker pool size")
        ->check(CLI::Range(1, 256));
    harvest_cmd->add_flag("--no-dedup", harvest_args.no_dedup,
                          "keep repeated sarcastic tweet ids");

    std::string classify_text;
    CLI::App* classify_cmd = app.add_subcommand("classify", "classify one cue text");
    classify_cmd->add_option("--text", classify_text, "cue text")->required();

    std::string match_sequence;
    int match_person = 0;
    CLI::App* match_cmd = app.add_subcommand("match", "match an author sequence");
    match_cmd
        ->add_option("--sequence", match_sequence, "canonical author letters, e.g. ABAC")
        ->required()
        ->check([](const std::string& value) -> std::string {
            if (value.empty()) return "sequence must not be empty";
            for (const char c : value) {
                if (c < 'A' || c > 'Z') return "sequence must use letters A-Z";
            }
            return {};
        });
    match_cmd->add_option("--person", match_person, "person class: 1, 2 or 3")
        ->required()
        ->check(CLI::Range(1, 3));

    std::string negatives_source, negatives_lexicon, negatives_lang = "en", negatives_out;
    std::size_t negatives_count = 0;
    CLI::App* negatives_cmd = app.add_subcommand("negatives", "sample non-sarcastic instances");
    negatives_cmd->add_option("--source", negatives_source, "source config file")->required();
    negatives_cmd->add_option("--count", negatives_count, "number of instances")->required();
    negatives_cmd->add_option("--lexicon", negatives_lexicon,
                              "file with one blocked word/#hashtag per line");
    negatives_cmd->add_option("--lang", negatives_lang, "ISO 639-1 language");
    negatives_cmd->add_option("--out", negatives_out, "output file (JSON Lines)")->required();

    std::string hashtags_source, hashtags_tags, hashtags_out;
    CLI::App* hashtags_cmd =
        app.add_subcommand("hashtags", "collect tweets ending with the given hashtags");
    hashtags_cmd->add_option("--source", hashtags_source, "source config file")->required();
    hashtags_cmd->add_option("--tags", hashtags_tags, "comma-separated hashtags")->required();
    hashtags_cmd->add_option("--out", hashtags_out, "output file (JSON Lines)")->required();

    std::string stats_in, stats_format = "text";
    std::size_t stats_top_k = 5;
    CLI::App* stats_cmd = app.add_subcommand("stats", "corpus statistics for a dataset");
    stats_cmd->add_option("--in", stats_in, "dataset file (JSON Lines)")->required();
    stats_cmd->add_option("--format", stats_format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    stats_cmd->add_option("--top-k", stats_top_k, "author patterns per class before Other");

    std::string synth_mix, synth_out, synth_truth;
    std::uint64_t synth_seed = 0;
    double synth_ambiguous = 0.0;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a planted corpus + truth file");
    synth_cmd->add_option("--mix", synth_mix, "mix file (JSON array)")->required();
    synth_cmd->add_option("--seed", synth_seed, "generator seed")->required();
    synth_cmd->add_option("--ambiguous", synth_ambiguous, "fraction of pattern-violating threads")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--out", synth_out, "corpus output file (JSON Lines)")->required();
    synth_cmd->add_option("--truth", synth_truth, "truth output file (JSON Lines)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    harvest_args.query_given = harvest_cmd->count("--query") > 0;

    try {
        if (harvest_cmd->parsed()) return do_harvest(harvest_args);
        if (classify_cmd->parsed()) return do_classify(classify_text);
        if (match_cmd->parsed()) return do_match(match_sequence, match_person);
        if (negatives_cmd->parsed()) {
            return do_negatives(negatives_source, negatives_count, negatives_lexicon,
                                negatives_lang, negatives_out);
        }
        if (hashtags_cmd->parsed()) return do_hashtags(hashtags_source, hashtags_tags, hashtags_out);
        if (stats_cmd->parsed()) return do_stats(stats_in, stats_format, stats_top_k);
        if (synth_cmd->parsed()) {
            return do_synth(synth_mix, synth_seed, synth_ambiguous, synth_out, synth_truth);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOperational;
    }
    return kExitUsage;
}

}  // namespace cueharvest
