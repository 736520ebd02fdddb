//
// Harvest pipeline: fetch cue candidates, classify each cue, traverse its
// reply chain to the root, match the author sequence and emit labeled
// instances, plus negative sampling and the trailing-hashtag baseline
// collector. Every discarded candidate lands in exactly one report counter,
// so fetched == emitted + unknown + broken + nomatch + dedup always holds.
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cueharvest/core.hpp"
#include "cueharvest/cue_classifier.hpp"
#include "cueharvest/sources.hpp"

namespace cueharvest {

enum class Label { Sarcastic, NonSarcastic };

struct LabeledInstance {
    Label label = Label::Sarcastic;
    std::optional<PersonClass> person;      // absent for negatives
    std::optional<Perspective> perspective; // absent for negatives
    Tweet sarcastic_tweet;                  // for negatives: the sampled tweet
    std::optional<Tweet> cue_tweet;
    std::optional<Tweet> oblivious_tweet;
    std::optional<Tweet> eliciting_tweet;
    std::optional<std::string> author_sequence;
    std::optional<std::size_t> position;
    std::optional<std::size_t> cue_lag;

    bool operator==(const LabeledInstance&) const = default;
};

struct HarvestConfig {
    std::string query = kCueQueryPhrase;
    std::optional<std::string> lang_filter;
    std::size_t max_thread_length = 100;
    std::size_t max_candidates = 0;  // 0 = unlimited
    // inclusive [from, to] bounds on the cue's created_at, epoch seconds
    std::optional<std::pair<std::int64_t, std::int64_t>> seed_window;
    bool dedup = true;
    int workers = 1;
};

enum class BrokenReason { MissingParent, TooLong, Cycle };

// Walks parent links from the cue up to the root. Broken chains are
// reported, never truncated: a shortened chain would change the author
// sequence and could mislabel the thread.
std::variant<ConversationThread, BrokenReason> traverse(ConversationSource& source,
                                                        const Tweet& cue, std::size_t max_len);

struct HarvestReport {
    std::size_t fetched = 0;
    std::size_t emitted = 0;
    std::size_t unknown_skips = 0;
    std::size_t broken_skips = 0;
    std::size_t nomatch_skips = 0;
    std::size_t dedup_skips = 0;
    // cues attracted per emitted instance -> number of instances
    std::map<std::size_t, std::size_t> cue_count_histogram;

    bool conserved() const {
        return fetched == emitted + unknown_skips + broken_skips + nomatch_skips + dedup_skips;
    }

    std::string to_text() const;
    nlohmann::ordered_json to_json() const;
};

struct HarvestResult {
    std::vector<LabeledInstance> instances;
    HarvestReport report;
};

// With workers > 1 the instances are sorted by sarcastic tweet id before
// being returned; single-worker output keeps fetch order. Either way the
// result is deterministic for a given corpus and config.
HarvestResult harvest(ConversationSource& source, const HarvestConfig& config);

class InsufficientSupplyError : public std::runtime_error {
public:
    explicit InsufficientSupplyError(const std::string& message) : std::runtime_error(message) {}
};

// Lexicon entries starting with '#' match as case-folded substrings, plain
// words match whole tokens. Sampled tweets also must not be cue candidates.
std::vector<LabeledInstance> sample_negatives(ConversationSource& source, std::size_t count,
                                              const std::vector<std::string>& lexicon,
                                              const std::string& lang);

const std::vector<std::string>& default_negative_lexicon();

struct HashtagReport {
    std::size_t matched = 0;
    std::int64_t span_seconds = 0;   // matched tweets' created_at span
    double tweets_per_day = 0.0;     // matched / span (span < 1 day counts as 1 day)
};

struct HashtagResult {
    std::vector<Tweet> tweets;
    HashtagReport report;
};

// Distant-supervision baseline: tweets whose text, after trimming trailing
// punctuation and whitespace, ends with one of the hashtags.
HashtagResult hashtag_harvest(ConversationSource& source,
                              const std::vector<std::string>& hashtags);

// Dataset rows, one JSON object per line:
//   {label, person, perspective, sar_id, sar_text, cue_id, cue_text, obl_id,
//    obl_text, eli_id, eli_text, author_sequence, position, cue_lag}
// person is 1|2|3|null, perspective "intended"|"perceived"|null, every
// other absent value is null.
std::string instance_to_jsonl(const LabeledInstance& instance);
void write_instances_jsonl(const std::vector<LabeledInstance>& instances, std::ostream& out);
std::vector<LabeledInstance> read_instances_jsonl(std::istream& in);

}  // namespace cueharvest
