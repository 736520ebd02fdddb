#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cueharvest/cue_classifier.hpp"
#include "cueharvest/matcher.hpp"
#include "cueharvest/pipeline.hpp"
#include "cueharvest/sequencer.hpp"
#include "cueharvest/synth.hpp"
#include "helpers.hpp"

using namespace cueharvest;
using cueharvest::testing::TempDir;
using cueharvest::testing::make_chain;
using cueharvest::testing::make_tweet;

namespace {

std::string corpus_of(const std::vector<Tweet>& tweets) {
    std::string out;
    for (const Tweet& t : tweets) out += tweet_to_json(t).dump() + "\n";
    return out;
}

// Figure-style fixtures: a perceived thread (cue A, oblivious B, sarcastic
// root C) and an intended one (cue A, reply B, sarcastic A, root C).
std::vector<Tweet> perceived_thread() {
    return make_chain({{"alice", "She was just being sarcastic!"},
                       {"bob", "Wait, what do you mean?"},
                       {"carol", "Sure, best service I have ever seen"}},
                      "L");
}

std::vector<Tweet> intended_thread() {
    return make_chain({{"dan", "I was just being sarcastic!"},
                       {"erin", "Huh, were you serious there?"},
                       {"dan", "Oh yes, absolutely flawless plan"},
                       {"fred", "We should try my plan tomorrow"}},
                      "R");
}

std::string synth_corpus_file(const TempDir& dir, const std::vector<MixEntry>& mix,
                              double ambiguous, std::uint64_t seed,
                              const std::string& name = "corpus.jsonl") {
    const SynthCorpus corpus = generate_corpus(mix, ambiguous, seed);
    std::ostringstream out;
    write_corpus_jsonl(corpus, out);
    return dir.write(name, out.str());
}

}  // namespace

TEST_CASE("traverse walks a chain to the root") {
    TempDir dir;
    const auto tweets = make_chain(
        {{"a", "cue text"}, {"b", "mid"}, {"c", "deeper"}, {"d", "the root"}});
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));
    const auto result = traverse(source, tweets[0], 100);
    REQUIRE(std::holds_alternative<ConversationThread>(result));
    const auto& thread = std::get<ConversationThread>(result);
    CHECK(thread.length() == 4);
    CHECK(thread.root().id == "t3");
}

TEST_CASE("traverse reports a hole in the chain") {
    TempDir dir;
    auto tweets = make_chain({{"a", "cue"}, {"b", "mid"}, {"c", "root"}});
    tweets.erase(tweets.begin() + 1);  // delete the grandparent's child
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));
    const auto result = traverse(source, tweets[0], 100);
    REQUIRE(std::holds_alternative<BrokenReason>(result));
    CHECK(std::get<BrokenReason>(result) == BrokenReason::MissingParent);
}

TEST_CASE("traverse of a root cue yields a single-tweet thread") {
    TempDir dir;
    const Tweet root = make_tweet("solo", std::nullopt, "a", "I was being sarcastic");
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of({root})));
    const auto result = traverse(source, root, 100);
    REQUIRE(std::holds_alternative<ConversationThread>(result));
    CHECK(std::get<ConversationThread>(result).length() == 1);
}

TEST_CASE("traverse enforces the length cap") {
    TempDir dir;
    const auto tweets =
        make_chain({{"a", "cue"}, {"b", "1"}, {"c", "2"}, {"d", "3"}, {"e", "root"}});
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));
    const auto capped = traverse(source, tweets[0], 4);
    REQUIRE(std::holds_alternative<BrokenReason>(capped));
    CHECK(std::get<BrokenReason>(capped) == BrokenReason::TooLong);
    CHECK(std::holds_alternative<ConversationThread>(traverse(source, tweets[0], 5)));
}

TEST_CASE("traverse detects parent cycles") {
    TempDir dir;
    std::vector<Tweet> tweets = {make_tweet("x", "y", "a", "cue"), make_tweet("y", "x", "b", "r")};
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));
    const auto result = traverse(source, tweets[0], 100);
    REQUIRE(std::holds_alternative<BrokenReason>(result));
    CHECK(std::get<BrokenReason>(result) == BrokenReason::Cycle);
}

TEST_CASE("traverse treats a malformed parent record as a hole") {
    TempDir dir;
    std::string corpus = corpus_of({make_tweet("cue", "broken", "a", "cue text")});
    corpus += R"({"id":"broken","parent_id":null,"text":"no author","created_at":"2019-10-01T00:00:00Z","lang":"en"})" "\n";
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus));
    const auto result = traverse(source, *source.lookup_tweet("cue"), 100);
    REQUIRE(std::holds_alternative<BrokenReason>(result));
    CHECK(std::get<BrokenReason>(result) == BrokenReason::MissingParent);
}

TEST_CASE("harvest labels the figure threads end to end") {
    TempDir dir;
    std::string corpus = corpus_of(perceived_thread());
    corpus += corpus_of(intended_thread());
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus));

    const HarvestResult result = harvest(source, {});
    REQUIRE(result.instances.size() == 2);
    CHECK(result.report.fetched == 2);
    CHECK(result.report.emitted == 2);
    CHECK(result.report.conserved());

    const LabeledInstance& perceived = result.instances[0];
    CHECK(perceived.person == PersonClass::Third);
    CHECK(perceived.perspective == Perspective::Perceived);
    CHECK(perceived.sarcastic_tweet.id == "L2");
    CHECK(perceived.sarcastic_tweet.text == "Sure, best service I have ever seen");
    REQUIRE(perceived.oblivious_tweet.has_value());
    CHECK(perceived.oblivious_tweet->id == "L1");
    CHECK_FALSE(perceived.eliciting_tweet.has_value());
    CHECK(perceived.author_sequence == "ABC");
    CHECK(perceived.position == 0);
    CHECK(perceived.cue_lag == 2);

    const LabeledInstance& intended = result.instances[1];
    CHECK(intended.person == PersonClass::First);
    CHECK(intended.perspective == Perspective::Intended);
    CHECK(intended.sarcastic_tweet.id == "R2");
    REQUIRE(intended.oblivious_tweet.has_value());
    CHECK(intended.oblivious_tweet->id == "R1");
    REQUIRE(intended.eliciting_tweet.has_value());
    CHECK(intended.eliciting_tweet->id == "R3");
    CHECK(intended.author_sequence == "ABAC");
    CHECK(intended.position == 1);
    CHECK(intended.cue_lag == 2);
}

TEST_CASE("a corpus of negated cues is fully skipped") {
    TempDir dir;
    std::vector<Tweet> tweets;
    for (int i = 0; i < 10; ++i) {
        tweets.push_back(make_tweet("n" + std::to_string(i), std::nullopt, "u",
                                    "I wasn't being sarcastic"));
    }
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));
    const HarvestResult result = harvest(source, {});
    CHECK(result.instances.empty());
    CHECK(result.report.fetched == 10);
    CHECK(result.report.unknown_skips == 10);
    CHECK(result.report.conserved());
}

TEST_CASE("harvest counts broken and unmatched threads") {
    TempDir dir;
    std::string corpus;
    // broken: the cue's parent is nowhere in the corpus
    corpus += corpus_of({make_tweet("b0", "gone", "u1", "Take it you are being sarcastic")});
    // nomatch: three tweets by the cue author (sequence AAA against 1st person)
    corpus += corpus_of(make_chain(
        {{"solo", "I was being sarcastic"}, {"solo", "filler"}, {"solo", "more filler"}}, "m"));
    // good: AB second person
    corpus += corpus_of(
        make_chain({{"u5", "Why are you being sarcastic?"}, {"u6", "Great, thanks a lot"}}, "g"));

    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus));
    const HarvestResult result = harvest(source, {});
    CHECK(result.report.fetched == 3);
    CHECK(result.report.emitted == 1);
    CHECK(result.report.broken_skips == 1);
    CHECK(result.report.nomatch_skips == 1);
    CHECK(result.report.conserved());
    REQUIRE(result.instances.size() == 1);
    CHECK(result.instances[0].sarcastic_tweet.id == "g1");
}

TEST_CASE("harvest deduplicates by sarcastic tweet id") {
    TempDir dir;
    std::string corpus = corpus_of({make_tweet("root", std::nullopt, "victim", "Obviously fine")});
    corpus += corpus_of({make_tweet("cueA", "root", "r1", "Take it you are being sarcastic")});
    corpus += corpus_of({make_tweet("cueB", "root", "r2", "Why are you being sarcastic?")});
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus));

    HarvestConfig config;
    const HarvestResult deduped = harvest(source, config);
    CHECK(deduped.report.fetched == 2);
    CHECK(deduped.report.emitted == 1);
    CHECK(deduped.report.dedup_skips == 1);
    CHECK(deduped.report.conserved());
    REQUIRE(deduped.instances.size() == 1);
    CHECK(deduped.instances[0].cue_tweet->id == "cueA");  // first cue wins
    CHECK(deduped.report.cue_count_histogram == std::map<std::size_t, std::size_t>{{2, 1}});

    config.dedup = false;
    const HarvestResult kept = harvest(source, config);
    CHECK(kept.report.emitted == 2);
    CHECK(kept.report.dedup_skips == 0);
}

TEST_CASE("harvest honors the candidate cap and the seed window") {
    TempDir dir;
    std::vector<Tweet> tweets = {
        make_tweet("a", std::nullopt, "u1", "I was being sarcastic", 1000),
        make_tweet("b", std::nullopt, "u2", "I was being sarcastic", 2000),
        make_tweet("c", std::nullopt, "u3", "I was being sarcastic", 3000),
    };
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));

    HarvestConfig config;
    config.max_candidates = 2;
    CHECK(harvest(source, config).report.fetched == 2);

    config = {};
    config.seed_window = {{1500, 2500}};
    const HarvestResult windowed = harvest(source, config);
    CHECK(windowed.report.fetched == 1);
}

TEST_CASE("single-worker harvests are byte-identical across runs") {
    TempDir dir;
    const std::string path = synth_corpus_file(
        dir, {{"ABAC", PersonClass::First, 30}, {"AB", PersonClass::Second, 30}}, 0.25, 17);

    std::ostringstream first, second;
    {
        FileCorpusSource source = FileCorpusSource::from_path(path);
        write_instances_jsonl(harvest(source, {}).instances, first);
    }
    {
        FileCorpusSource source = FileCorpusSource::from_path(path);
        write_instances_jsonl(harvest(source, {}).instances, second);
    }
    CHECK_FALSE(first.str().empty());
    CHECK(first.str() == second.str());
}

TEST_CASE("multi-worker harvest matches single-worker output after sorting") {
    TempDir dir;
    const std::string path = synth_corpus_file(dir,
                                               {{"ABAC", PersonClass::First, 60},
                                                {"ABA", PersonClass::Second, 50},
                                                {"ABC", PersonClass::Third, 40}},
                                               0.2, 23);

    FileCorpusSource source = FileCorpusSource::from_path(path);
    HarvestConfig config;
    const HarvestResult sequential = harvest(source, config);
    config.workers = 4;
    const HarvestResult parallel = harvest(source, config);

    CHECK(parallel.report.fetched == sequential.report.fetched);
    CHECK(parallel.report.emitted == sequential.report.emitted);
    CHECK(parallel.report.nomatch_skips == sequential.report.nomatch_skips);

    std::vector<LabeledInstance> sorted = sequential.instances;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const LabeledInstance& a, const LabeledInstance& b) {
                         return a.sarcastic_tweet.id < b.sarcastic_tweet.id;
                     });
    CHECK(parallel.instances == sorted);
}

TEST_CASE("emitted instances re-derive from their own cue and sequence") {
    TempDir dir;
    const std::string path = synth_corpus_file(dir,
                                               {{"ABAC", PersonClass::First, 20},
                                                {"AB", PersonClass::Second, 20},
                                                {"ABCB", PersonClass::Third, 20}},
                                               0.3, 5);
    FileCorpusSource source = FileCorpusSource::from_path(path);
    const HarvestResult result = harvest(source, {});
    CHECK(result.report.conserved());
    REQUIRE_FALSE(result.instances.empty());
    for (const LabeledInstance& instance : result.instances) {
        REQUIRE(instance.cue_tweet.has_value());
        CHECK(classify_cue(instance.cue_tweet->text).person == instance.person);
        const auto roles = match_roles(*instance.author_sequence, *instance.person);
        REQUIRE(roles.has_value());
        CHECK(roles->sarcastic_index == *instance.cue_lag);
        CHECK(roles->perspective == *instance.perspective);
        CHECK(*instance.position + *instance.cue_lag == instance.author_sequence->size() - 1);
    }
}

TEST_CASE("sample_negatives filters the lexicon and language") {
    TempDir dir;
    std::vector<Tweet> tweets;
    for (int i = 0; i < 5; ++i) {
        tweets.push_back(
            make_tweet("ok" + std::to_string(i), std::nullopt, "u", "just a plain tweet"));
    }
    tweets.push_back(make_tweet("s1", std::nullopt, "u", "loving this #sarcasm"));
    tweets.push_back(make_tweet("s2", std::nullopt, "u", "pure sarcasm right there"));
    tweets.push_back(make_tweet("fr", std::nullopt, "u", "une phrase", 1570000000, "fr"));
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));

    const auto negatives = sample_negatives(source, 5, default_negative_lexicon(), "en");
    REQUIRE(negatives.size() == 5);
    for (const LabeledInstance& instance : negatives) {
        CHECK(instance.label == Label::NonSarcastic);
        CHECK_FALSE(instance.person.has_value());
        CHECK_FALSE(instance.cue_tweet.has_value());
        CHECK(instance.sarcastic_tweet.id.starts_with("ok"));
    }

    CHECK(sample_negatives(source, 0, default_negative_lexicon(), "en").empty());
    CHECK_THROWS_AS(sample_negatives(source, 6, default_negative_lexicon(), "en"),
                    InsufficientSupplyError);
}

TEST_CASE("sample_negatives never returns cue candidates") {
    TempDir dir;
    std::vector<Tweet> tweets = {
        make_tweet("cueish", std::nullopt, "u", "stop being sarcastic please"),
        make_tweet("fine", std::nullopt, "u", "a perfectly normal tweet"),
    };
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));
    // even with an empty lexicon the cue text is excluded
    const auto negatives = sample_negatives(source, 1, {}, "en");
    REQUIRE(negatives.size() == 1);
    CHECK(negatives[0].sarcastic_tweet.id == "fine");
}

TEST_CASE("hashtag_harvest keeps only trailing hashtags") {
    TempDir dir;
    std::vector<Tweet> tweets = {
        make_tweet("k1", std::nullopt, "u", "nice weather today #sarcasm", 0),
        make_tweet("k2", std::nullopt, "u", "great plan #SARCASM!!!", 86400 * 2),
        make_tweet("d1", std::nullopt, "u", "#sarcasm is a hashtag I study", 86400),
        make_tweet("d2", std::nullopt, "u", "no tags at all", 86400),
        make_tweet("k3", std::nullopt, "u", "sure, fantastic #irony", 86400),
    };
    FileCorpusSource source = FileCorpusSource::from_path(dir.write("c.jsonl", corpus_of(tweets)));

    const HashtagResult result = hashtag_harvest(source, {"#sarcasm", "#irony"});
    REQUIRE(result.report.matched == 3);
    CHECK(result.tweets[0].id == "k1");
    CHECK(result.tweets[1].id == "k2");
    CHECK(result.tweets[2].id == "k3");
    CHECK(result.report.span_seconds == 86400 * 2);
    CHECK(result.report.tweets_per_day == doctest::Approx(1.5));

    CHECK(hashtag_harvest(source, {}).report.matched == 0);
}

TEST_CASE("dataset lines round trip") {
    TempDir dir;
    const std::string path = synth_corpus_file(
        dir, {{"ABAC", PersonClass::First, 5}, {"AB", PersonClass::Second, 5}}, 0.0, 77);
    FileCorpusSource source = FileCorpusSource::from_path(path);
    HarvestResult result = harvest(source, {});
    LabeledInstance negative;
    negative.label = Label::NonSarcastic;
    negative.sarcastic_tweet = make_tweet("neg1", std::nullopt, "u", "plain text");
    result.instances.push_back(negative);

    std::ostringstream out;
    write_instances_jsonl(result.instances, out);
    std::istringstream in(out.str());
    const std::vector<LabeledInstance> back = read_instances_jsonl(in);
    REQUIRE(back.size() == result.instances.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].label == result.instances[i].label);
        CHECK(back[i].person == result.instances[i].person);
        CHECK(back[i].perspective == result.instances[i].perspective);
        CHECK(back[i].sarcastic_tweet.id == result.instances[i].sarcastic_tweet.id);
        CHECK(back[i].sarcastic_tweet.text == result.instances[i].sarcastic_tweet.text);
        CHECK(back[i].author_sequence == result.instances[i].author_sequence);
        CHECK(back[i].position == result.instances[i].position);
        CHECK(back[i].cue_lag == result.instances[i].cue_lag);
        CHECK(back[i].oblivious_tweet.has_value() ==
              result.instances[i].oblivious_tweet.has_value());
        CHECK(back[i].eliciting_tweet.has_value() ==
              result.instances[i].eliciting_tweet.has_value());
    }

    std::istringstream bad("{\"label\":\"sarcastic\"");
    CHECK_THROWS_AS(read_instances_jsonl(bad), std::exception);
}

TEST_CASE("the shipped lexicon file matches the built-in default") {
    std::ifstream in(std::string(CUEHARVEST_PROJECT_DIR) + "/data/negative_lexicon.txt");
    REQUIRE(static_cast<bool>(in));
    std::vector<std::string> from_file;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) from_file.push_back(line);
    }
    CHECK(from_file == default_negative_lexicon());
}

TEST_CASE("report serialization carries every counter") {
    HarvestReport report;
    report.fetched = 10;
    report.emitted = 4;
    report.unknown_skips = 3;
    report.broken_skips = 1;
    report.nomatch_skips = 1;
    report.dedup_skips = 1;
    report.cue_count_histogram[1] = 3;
    report.cue_count_histogram[2] = 1;
    CHECK(report.conserved());

    const std::string text = report.to_text();
    CHECK(text.find("fetched: 10") != std::string::npos);
    CHECK(text.find("dedup_skips: 1") != std::string::npos);
    CHECK(text.find("instances_with_2_cues: 1") != std::string::npos);

    const nlohmann::ordered_json j = report.to_json();
    CHECK(j["fetched"] == 10);
    CHECK(j["cue_count_histogram"]["2"] == 1);
}
