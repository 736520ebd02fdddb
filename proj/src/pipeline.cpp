#include "cueharvest/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "cueharvest/matcher.hpp"
#include "cueharvest/sequencer.hpp"

namespace cueharvest {

std::variant<ConversationThread, BrokenReason> traverse(ConversationSource& source,
                                                        const Tweet& cue, std::size_t max_len) {
    std::vector<Tweet> chain{cue};
    std::unordered_set<std::string> seen{cue.id};
    while (chain.back().parent_id) {
        if (chain.size() >= max_len) return BrokenReason::TooLong;
        const std::string parent_id = *chain.back().parent_id;
        if (seen.contains(parent_id)) return BrokenReason::Cycle;
        std::optional<Tweet> parent;
        try {
            parent = source.lookup_tweet(parent_id);
        } catch (const SourceError& e) {
            if (e.kind() != SourceErrorKind::MalformedRecord) throw;
            parent = std::nullopt;  // unusable record counts as a hole
        }
        if (!parent) return BrokenReason::MissingParent;
        seen.insert(parent->id);
        chain.push_back(std::move(*parent));
    }
    try {
        return validate_thread(std::move(chain));
    } catch (const ThreadError&) {
        // a source returning inconsistent link data breaks the chain
        return BrokenReason::MissingParent;
    }
}

namespace {

struct CandidateOutcome {
    std::optional<LabeledInstance> instance;
    std::size_t unknown = 0, broken = 0, nomatch = 0;
};

CandidateOutcome process_candidate(ConversationSource& source, const HarvestConfig& config,
                                   const Tweet& cue) {
    CandidateOutcome out;
    const CueDecision decision = classify_cue(cue.text);
    if (decision.person == PersonClass::Unknown) {
        out.unknown = 1;
        return out;
    }
    auto traversed = traverse(source, cue, config.max_thread_length);
    if (std::holds_alternative<BrokenReason>(traversed)) {
        out.broken = 1;
        return out;
    }
    const ConversationThread& thread = std::get<ConversationThread>(traversed);

    std::optional<AuthorSequence> sequence;
    try {
        sequence = canonicalize(thread);
    } catch (const TooManyAuthorsError&) {
        sequence = std::nullopt;  // cannot be labeled unambiguously either way
    }
    const std::optional<RoleAssignment> roles =
        sequence ? match_roles(*sequence, decision.person) : std::nullopt;
    if (!roles) {
        out.nomatch = 1;
        return out;
    }

    const PositionInfo pos = positions_of(thread.length(), roles->sarcastic_index);

    LabeledInstance instance;
    instance.label = Label::Sarcastic;
    instance.person = decision.person;
    instance.perspective = roles->perspective;
    instance.sarcastic_tweet = thread.tweets[roles->sarcastic_index];
    instance.cue_tweet = thread.tweets[0];
    if (roles->oblivious_index) instance.oblivious_tweet = thread.tweets[*roles->oblivious_index];
    if (roles->eliciting_index) instance.eliciting_tweet = thread.tweets[*roles->eliciting_index];
    instance.author_sequence = sequence->letters;
    instance.position = pos.position;
    instance.cue_lag = pos.cue_lag;
    out.instance = std::move(instance);
    return out;
}

}  // namespace

HarvestResult harvest(ConversationSource& source, const HarvestConfig& config) {
    // fetch all candidates first; ordinals make dedup and output order
    // independent of worker scheduling
    std::vector<Tweet> candidates;
    std::optional<std::string> cursor;
    bool more = true;
    while (more) {
        TweetPage page = source.search_cues(config.query, config.lang_filter, cursor);
        for (Tweet& t : page.tweets) {
            if (config.seed_window) {
                const auto ts = parse_rfc3339(t.created_at);
                if (!ts || *ts < config.seed_window->first || *ts > config.seed_window->second) {
                    continue;
                }
            }
            candidates.push_back(std::move(t));
            if (config.max_candidates && candidates.size() >= config.max_candidates) break;
        }
        if (config.max_candidates && candidates.size() >= config.max_candidates) break;
        cursor = page.next_cursor;
        more = cursor.has_value();
    }

    std::vector<CandidateOutcome> outcomes(candidates.size());
    const int workers = std::max(1, config.workers);
    if (workers == 1 || candidates.size() < 2) {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            outcomes[i] = process_candidate(source, config, candidates[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= candidates.size()) return;
                try {
                    outcomes[i] = process_candidate(source, config, candidates[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(candidates.size());
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const std::size_t pool_size =
            std::min<std::size_t>(static_cast<std::size_t>(workers), candidates.size());
        pool.reserve(pool_size);
        for (std::size_t i = 0; i < pool_size; ++i) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    HarvestResult result;
    result.report.fetched = candidates.size();
    std::unordered_map<std::string, std::size_t> cues_per_sarcastic;
    for (CandidateOutcome& out : outcomes) {
        result.report.unknown_skips += out.unknown;
        result.report.broken_skips += out.broken;
        result.report.nomatch_skips += out.nomatch;
        if (!out.instance) continue;
        const std::string& sar_id = out.instance->sarcastic_tweet.id;
        if (config.dedup) {
            auto [it, fresh] = cues_per_sarcastic.emplace(sar_id, 1);
            if (!fresh) {
                ++it->second;
                ++result.report.dedup_skips;
                continue;
            }
        } else {
            ++cues_per_sarcastic[sar_id];
        }
        result.instances.push_back(std::move(*out.instance));
    }
    result.report.emitted = result.instances.size();
    for (const LabeledInstance& instance : result.instances) {
        ++result.report.cue_count_histogram[cues_per_sarcastic[instance.sarcastic_tweet.id]];
    }

    if (workers > 1) {
        std::stable_sort(result.instances.begin(), result.instances.end(),
                         [](const LabeledInstance& a, const LabeledInstance& b) {
                             return a.sarcastic_tweet.id < b.sarcastic_tweet.id;
                         });
    }
    return result;
}

std::string HarvestReport::to_text() const {
    std::ostringstream out;
    out << "fetched: " << fetched << '\n'
        << "emitted: " << emitted << '\n'
        << "unknown_skips: " << unknown_skips << '\n'
        << "broken_skips: " << broken_skips << '\n'
        << "nomatch_skips: " << nomatch_skips << '\n'
        << "dedup_skips: " << dedup_skips << '\n';
    for (const auto& [cues, instances] : cue_count_histogram) {
        out << "instances_with_" << cues << "_cues: " << instances << '\n';
    }
    return out.str();
}

nlohmann::ordered_json HarvestReport::to_json() const {
    nlohmann::ordered_json j;
    j["fetched"] = fetched;
    j["emitted"] = emitted;
    j["unknown_skips"] = unknown_skips;
    j["broken_skips"] = broken_skips;
    j["nomatch_skips"] = nomatch_skips;
    j["dedup_skips"] = dedup_skips;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [cues, instances] : cue_count_histogram) {
        hist[std::to_string(cues)] = instances;
    }
    j["cue_count_histogram"] = hist;
    return j;
}

// ---------------------------------------------------------------------------
// Negative sampling and the hashtag baseline

const std::vector<std::string>& default_negative_lexicon() {
    static const std::vector<std::string> lexicon = {
        "sarcasm", "sarcastic", "sarc",  "irony",       "ironic",
        "#sarcasm", "#sarcastic", "#irony", "#not",
    };
    return lexicon;
}

namespace {

bool lexicon_blocks(const std::string& text, const std::vector<std::string>& lexicon) {
    const std::string normalized = normalize_text(text);
    std::vector<std::string> tokens;  // built lazily, word entries only
    bool tokens_ready = false;
    for (const std::string& entry : lexicon) {
        if (entry.empty()) continue;
        if (entry[0] == '#') {
            if (normalized.find(normalize_text(entry)) != std::string::npos) return true;
        } else {
            if (!tokens_ready) {
                tokens = tokenize(text);
                tokens_ready = true;
            }
            const std::string folded = normalize_text(entry);
            if (std::find(tokens.begin(), tokens.end(), folded) != tokens.end()) return true;
        }
    }
    return false;
}

std::string rtrim_punct(const std::string& text) {
    std::size_t end = text.size();
    while (end > 0) {
        const unsigned char c = static_cast<unsigned char>(text[end - 1]);
        if (c < 0x80 && (std::isspace(c) || (std::ispunct(c) && c != '#'))) {
            --end;
        } else {
            break;
        }
    }
    return text.substr(0, end);
}

}  // namespace

std::vector<LabeledInstance> sample_negatives(ConversationSource& source, std::size_t count,
                                              const std::vector<std::string>& lexicon,
                                              const std::string& lang) {
    std::vector<LabeledInstance> negatives;
    negatives.reserve(count);
    std::optional<std::string> cursor;
    bool more = true;
    while (more && negatives.size() < count) {
        TweetPage page = source.scan(cursor);
        for (Tweet& t : page.tweets) {
            if (negatives.size() >= count) break;
            if (!lang.empty() && t.lang != lang) continue;
            if (is_cue_candidate(t.text)) continue;
            if (lexicon_blocks(t.text, lexicon)) continue;
            LabeledInstance instance;
            instance.label = Label::NonSarcastic;
            instance.sarcastic_tweet = std::move(t);
            negatives.push_back(std::move(instance));
        }
        cursor = page.next_cursor;
        more = cursor.has_value();
    }
    if (negatives.size() < count) {
        throw InsufficientSupplyError("only " + std::to_string(negatives.size()) + " of " +
                                      std::to_string(count) + " eligible tweets available");
    }
    return negatives;
}

HashtagResult hashtag_harvest(ConversationSource& source,
                              const std::vector<std::string>& hashtags) {
    HashtagResult result;
    std::unordered_set<std::string> seen;
    for (const std::string& tag : hashtags) {
        if (tag.empty()) continue;
        const std::string folded_tag = normalize_text(tag);
        std::optional<std::string> cursor;
        bool more = true;
        while (more) {
            TweetPage page = source.search_cues(tag, std::nullopt, cursor);
            for (Tweet& t : page.tweets) {
                if (seen.contains(t.id)) continue;
                const std::string trimmed = rtrim_punct(normalize_text(t.text));
                if (!trimmed.ends_with(folded_tag)) continue;
                seen.insert(t.id);
                result.tweets.push_back(std::move(t));
            }
            cursor = page.next_cursor;
            more = cursor.has_value();
        }
    }
    result.report.matched = result.tweets.size();
    if (!result.tweets.empty()) {
        std::int64_t min_ts = std::numeric_limits<std::int64_t>::max();
        std::int64_t max_ts = std::numeric_limits<std::int64_t>::min();
        for (const Tweet& t : result.tweets) {
            if (const auto ts = parse_rfc3339(t.created_at)) {
                min_ts = std::min(min_ts, *ts);
                max_ts = std::max(max_ts, *ts);
            }
        }
        if (min_ts <= max_ts) {
            result.report.span_seconds = max_ts - min_ts;
            const double days = std::max(1.0, static_cast<double>(max_ts - min_ts) / 86400.0);
            result.report.tweets_per_day = static_cast<double>(result.report.matched) / days;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Dataset serialization

namespace {

constexpr const char* kLabelSarcastic = "sarcastic";
constexpr const char* kLabelNonSarcastic = "non_sarcastic";

void put_tweet(nlohmann::ordered_json& j, const char* id_key, const char* text_key,
               const std::optional<Tweet>& tweet) {
    if (tweet) {
        j[id_key] = tweet->id;
        j[text_key] = tweet->text;
    } else {
        j[id_key] = nullptr;
        j[text_key] = nullptr;
    }
}

std::optional<Tweet> tweet_from_fields(const nlohmann::json& j, const char* id_key,
                                       const char* text_key) {
    if (!j.contains(id_key) || j[id_key].is_null()) return std::nullopt;
    Tweet t;
    t.id = j[id_key].get<std::string>();
    t.text = j.value(text_key, std::string{});
    return t;
}

}  // namespace

std::string instance_to_jsonl(const LabeledInstance& instance) {
    nlohmann::ordered_json j;
    j["label"] = instance.label == Label::Sarcastic ? kLabelSarcastic : kLabelNonSarcastic;
    if (instance.person) j["person"] = person_number(*instance.person);
    else j["person"] = nullptr;
    if (instance.perspective) j["perspective"] = to_string(*instance.perspective);
    else j["perspective"] = nullptr;
    j["sar_id"] = instance.sarcastic_tweet.id;
    j["sar_text"] = instance.sarcastic_tweet.text;
    put_tweet(j, "cue_id", "cue_text", instance.cue_tweet);
    put_tweet(j, "obl_id", "obl_text", instance.oblivious_tweet);
    put_tweet(j, "eli_id", "eli_text", instance.eliciting_tweet);
    if (instance.author_sequence) j["author_sequence"] = *instance.author_sequence;
    else j["author_sequence"] = nullptr;
    if (instance.position) j["position"] = *instance.position;
    else j["position"] = nullptr;
    if (instance.cue_lag) j["cue_lag"] = *instance.cue_lag;
    else j["cue_lag"] = nullptr;
    return j.dump();
}

void write_instances_jsonl(const std::vector<LabeledInstance>& instances, std::ostream& out) {
    for (const LabeledInstance& instance : instances) {
        out << instance_to_jsonl(instance) << '\n';
    }
}

std::vector<LabeledInstance> read_instances_jsonl(std::istream& in) {
    std::vector<LabeledInstance> instances;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw std::runtime_error("dataset line " + std::to_string(lineno) + " is not JSON");
        }
        LabeledInstance instance;
        const std::string label = j.at("label").get<std::string>();
        if (label == kLabelSarcastic) instance.label = Label::Sarcastic;
        else if (label == kLabelNonSarcastic) instance.label = Label::NonSarcastic;
        else throw std::runtime_error("dataset line " + std::to_string(lineno) + ": bad label");
        if (j.contains("person") && !j["person"].is_null()) {
            const PersonClass person = person_from_number(j["person"].get<int>());
            if (person == PersonClass::Unknown) {
                throw std::runtime_error("dataset line " + std::to_string(lineno) + ": bad person");
            }
            instance.person = person;
        }
        if (j.contains("perspective") && !j["perspective"].is_null()) {
            const std::string p = j["perspective"].get<std::string>();
            instance.perspective = p == "intended" ? Perspective::Intended : Perspective::Perceived;
        }
        instance.sarcastic_tweet.id = j.at("sar_id").get<std::string>();
        instance.sarcastic_tweet.text = j.value("sar_text", std::string{});
        instance.cue_tweet = tweet_from_fields(j, "cue_id", "cue_text");
        instance.oblivious_tweet = tweet_from_fields(j, "obl_id", "obl_text");
        instance.eliciting_tweet = tweet_from_fields(j, "eli_id", "eli_text");
        if (j.contains("author_sequence") && !j["author_sequence"].is_null()) {
            instance.author_sequence = j["author_sequence"].get<std::string>();
        }
        if (j.contains("position") && !j["position"].is_null()) {
            instance.position = j["position"].get<std::size_t>();
        }
        if (j.contains("cue_lag") && !j["cue_lag"].is_null()) {
            instance.cue_lag = j["cue_lag"].get<std::size_t>();
        }
        instances.push_back(std::move(instance));
    }
    return instances;
}

}  // namespace cueharvest
