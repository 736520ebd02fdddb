#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#include <json.hpp>

#include "cueharvest/sources.hpp"
#include "helpers.hpp"

using namespace cueharvest;
using cueharvest::testing::TempDir;
using cueharvest::testing::make_tweet;
using cueharvest::testing::slurp;

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
    static int counter = 0;
    const std::string capture = dir.file("cli_out_" + std::to_string(counter++) + ".txt");
    const std::string command =
        std::string(CUEHARVEST_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = slurp(capture);
    return result;
}

std::string write_mix(const TempDir& dir) {
    return dir.write("mix.json",
                     R"([{"template": "ABAC", "person": 1, "count": 20},
                         {"template": "AB", "person": 2, "count": 20}])");
}

std::string write_source_cfg(const TempDir& dir, const std::string& corpus_path,
                             const std::string& name = "source.cfg") {
    return dir.write(name, "kind = file\npath = " + corpus_path + "\n");
}

}  // namespace

TEST_CASE("classify subcommand prints person and reason") {
    TempDir dir;
    RunResult r = run_cli(dir, "classify --text \"Why are you being sarcastic?\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "person=2 reason=classified pronoun=you\n");

    r = run_cli(dir, "classify --text \"I wasn't being sarcastic\"");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "person=unknown reason=negation_present\n");
}

TEST_CASE("match subcommand prints role indices or NOMATCH") {
    TempDir dir;
    RunResult r = run_cli(dir, "match --sequence ABAC --person 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "sarc=2 obl=1 eli=3\n");

    r = run_cli(dir, "match --sequence ABA --person 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "sarc=2 obl=1\n");

    r = run_cli(dir, "match --sequence ABAA --person 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "NOMATCH\n");
}

TEST_CASE("usage errors exit with code 2") {
    TempDir dir;
    CHECK(run_cli(dir, "").exit_code == 2);
    CHECK(run_cli(dir, "match --sequence ABAC --person 9").exit_code == 2);
    CHECK(run_cli(dir, "match --sequence ab@c --person 1").exit_code == 2);
    CHECK(run_cli(dir, "match --person 1").exit_code == 2);
    CHECK(run_cli(dir, "frobnicate").exit_code == 2);
    CHECK(run_cli(dir, "stats --in x --format yaml").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
    TempDir dir;
    const RunResult r = run_cli(dir, "--help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("harvest") != std::string::npos);
}

TEST_CASE("operational failures exit with code 1") {
    TempDir dir;
    const RunResult r = run_cli(dir, "harvest --source /nonexistent.cfg --out " + dir.file("o"));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("synth, harvest and stats chain together") {
    TempDir dir;
    const std::string mix = write_mix(dir);
    const std::string corpus = dir.file("corpus.jsonl");
    const std::string truth = dir.file("truth.jsonl");

    RunResult r = run_cli(dir, "synth --mix " + mix + " --seed 11 --ambiguous 0.25 --out " +
                                   corpus + " --truth " + truth);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output == "threads: 40\n");

    const std::string cfg = write_source_cfg(dir, corpus);
    const std::string dataset = dir.file("dataset.jsonl");
    const std::string report = dir.file("report.json");
    r = run_cli(dir, "harvest --source " + cfg + " --lang en --max-thread-len 100 --out " +
                         dataset + " --report " + report);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("fetched: 40") != std::string::npos);
    CHECK(r.output.find("emitted: 30") != std::string::npos);
    CHECK(r.output.find("nomatch_skips: 10") != std::string::npos);

    const nlohmann::json report_json = nlohmann::json::parse(slurp(report));
    CHECK(report_json["fetched"] == 40);
    CHECK(report_json["emitted"] == 30);

    // a second identical run produces a byte-identical dataset
    const std::string dataset2 = dir.file("dataset2.jsonl");
    r = run_cli(dir, "harvest --source " + cfg + " --lang en --max-thread-len 100 --out " +
                         dataset2);
    REQUIRE(r.exit_code == 0);
    const std::string bytes = slurp(dataset);
    CHECK_FALSE(bytes.empty());
    CHECK(bytes == slurp(dataset2));

    r = run_cli(dir, "stats --in " + dataset + " --format json --top-k 5");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json stats = nlohmann::json::parse(r.output);
    CHECK(stats["person_breakdown"]["first"]["sarcastic"] == 15);
    CHECK(stats["person_breakdown"]["second"]["sarcastic"] == 15);
    CHECK(stats["pattern_histogram"]["first"][0]["sequence"] == "ABAC");
    CHECK(stats["summary"]["mean_thread_length"] == 3.0);

    r = run_cli(dir, "stats --in " + dataset + " --format text --top-k 5");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("subtotal") != std::string::npos);
}

TEST_CASE("the source config query is the default search phrase") {
    TempDir dir;
    std::string corpus;
    corpus += tweet_to_json(make_tweet("c1", std::nullopt, "u", "a totally custom phrase here"))
                  .dump() +
              "\n";
    corpus += tweet_to_json(make_tweet("c2", std::nullopt, "u", "I was being sarcastic")).dump() +
              "\n";
    const std::string corpus_path = dir.write("q.jsonl", corpus);
    const std::string cfg =
        dir.write("q.cfg", "kind = file\npath = " + corpus_path + "\nquery = custom phrase\n");

    RunResult r = run_cli(dir, "harvest --source " + cfg + " --out " + dir.file("a.jsonl"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("fetched: 1") != std::string::npos);
    CHECK(r.output.find("unknown_skips: 1") != std::string::npos);

    r = run_cli(dir, "harvest --source " + cfg + " --query \"being sarcastic\" --out " +
                         dir.file("b.jsonl"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("fetched: 1") != std::string::npos);
    CHECK(r.output.find("nomatch_skips: 1") != std::string::npos);
}

TEST_CASE("negatives subcommand writes filtered instances") {
    TempDir dir;
    std::string corpus;
    for (int i = 0; i < 6; ++i) {
        corpus += tweet_to_json(make_tweet("ok" + std::to_string(i), std::nullopt, "u",
                                           "a perfectly plain tweet"))
                      .dump() +
                  "\n";
    }
    corpus += tweet_to_json(make_tweet("bad", std::nullopt, "u", "this is #sarcasm")).dump() + "\n";
    const std::string corpus_path = dir.write("neg_corpus.jsonl", corpus);
    const std::string cfg = write_source_cfg(dir, corpus_path);
    const std::string out = dir.file("negatives.jsonl");
    const std::string lexicon = dir.write("lexicon.txt", "#sarcasm\nsarcastic\n");

    RunResult r = run_cli(dir, "negatives --source " + cfg + " --count 5 --lexicon " + lexicon +
                                   " --out " + out);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output == "sampled: 5\n");
    const std::string written = slurp(out);
    CHECK(written.find("\"bad\"") == std::string::npos);
    CHECK(written.find("non_sarcastic") != std::string::npos);

    r = run_cli(dir, "negatives --source " + cfg + " --count 99 --out " + dir.file("n2"));
    CHECK(r.exit_code == 1);  // insufficient supply
}

TEST_CASE("hashtags subcommand reports collection rate") {
    TempDir dir;
    std::string corpus;
    corpus += tweet_to_json(make_tweet("h1", std::nullopt, "u", "lovely monday #sarcasm", 0)).dump() + "\n";
    corpus +=
        tweet_to_json(make_tweet("h2", std::nullopt, "u", "sure thing #irony!", 86400)).dump() + "\n";
    corpus +=
        tweet_to_json(make_tweet("h3", std::nullopt, "u", "#sarcasm is interesting", 3600)).dump() +
        "\n";
    const std::string cfg = write_source_cfg(dir, dir.write("ht.jsonl", corpus));
    const std::string out = dir.file("tags.jsonl");

    const RunResult r =
        run_cli(dir, "hashtags --source " + cfg + " --tags \"#sarcasm,#irony\" --out " + out);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("matched: 2") != std::string::npos);
    CHECK(r.output.find("tweets_per_day: 2") != std::string::npos);
    const std::string written = slurp(out);
    CHECK(written.find("\"h1\"") != std::string::npos);
    CHECK(written.find("\"h3\"") == std::string::npos);
}
