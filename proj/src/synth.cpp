#include "cueharvest/synth.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "cueharvest/sources.hpp"

namespace cueharvest {

namespace {

// Templates must classify to their class under classify_cue; checked in tests.
const std::vector<std::string> kFirstCues = {
    "I was only being sarcastic lol",
    "Shudda been more clear...I was being sarcastic",
    "I'm almost always being sarcastic, but this was real",
    "Relax, I was just being sarcastic",
    "Come on, I was being sarcastic there",
};

const std::vector<std::string> kSecondCues = {
    "Why are you being sarcastic?",
    "Take it you are being sarcastic",
    "Are you being sarcastic right now?",
    "Pretty sure you are being sarcastic again",
};

const std::vector<std::string> kThirdCues = {
    "She was just being sarcastic!",
    "She was being sarcastic. You missed the joke",
    "Pretty sure he was being sarcastic",
    "Relax, he was being sarcastic",
};

// Filler bodies: must never contain the query phrase or sarcasm-related
// words, so they stay out of searches and negative-sample filters.
const std::vector<std::string> kFillerTexts = {
    "What a game last night",
    "Nice weather we are having today",
    "Totally agree with this take",
    "Anyone else watching the finale tonight",
    "Best coffee spot in town hands down",
    "Traffic on the bridge again, lovely",
    "Just finished the book, highly recommend",
    "That concert was something else",
    "My plants finally bloomed this week",
    "New episode drops tomorrow apparently",
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

const std::vector<std::string>& cue_bank(PersonClass person) {
    switch (person) {
    case PersonClass::First: return kFirstCues;
    case PersonClass::Second: return kSecondCues;
    case PersonClass::Third: return kThirdCues;
    default:
        throw std::invalid_argument("generate_thread: person must be first, second or third");
    }
}

void validate_template(const std::string& tpl) {
    if (tpl.empty()) {
        throw InvalidTemplateError("empty sequence template");
    }
    if (tpl.front() != 'A') {
        throw InvalidTemplateError("template must start with A: " + tpl);
    }
    int introduced = 0;
    for (const char c : tpl) {
        if (c < 'A' || c > 'Z') {
            throw InvalidTemplateError("template letters must be A-Z: " + tpl);
        }
        const int idx = c - 'A';
        if (idx > introduced) {
            throw InvalidTemplateError("template introduces letters out of order: " + tpl);
        }
        if (idx == introduced) ++introduced;
    }
}

// One extra A/B/C breaks the class's pattern while keeping the template
// canonical. Only applied to templates that match to begin with.
std::string violated_template(const std::string& tpl, PersonClass person) {
    switch (person) {
    case PersonClass::First: return tpl + 'A';
    case PersonClass::Second: return tpl + 'B';
    default: return tpl + 'C';
    }
}

constexpr std::int64_t kTimeBase = 1569888000;  // 2019-10-01T00:00:00Z

}  // namespace

std::optional<RoleAssignment> oracle_roles(const std::string& letters, PersonClass person) {
    if (person == PersonClass::Unknown) {
        throw std::invalid_argument("oracle_roles: unknown person class");
    }
    const std::size_t n = letters.size();
    if (n == 0 || letters[0] != 'A') return std::nullopt;

    std::size_t sarcastic = 0;
    std::optional<std::size_t> oblivious;

    switch (person) {
    case PersonClass::First: {
        std::size_t a_count = 0;
        std::size_t second_a = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (letters[i] == 'A') {
                ++a_count;
                if (a_count == 2) second_a = i;
            }
        }
        if (a_count != 2) return std::nullopt;
        sarcastic = second_a;
        if (sarcastic - 1 == 1) oblivious = 1;  // zone of exactly one tweet
        break;
    }
    case PersonClass::Second: {
        std::size_t b_count = 0;
        std::size_t b_index = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (letters[i] == 'B') {
                ++b_count;
                b_index = i;
            } else if (letters[i] != 'A') {
                return std::nullopt;
            }
        }
        if (b_count != 1 || b_index < 1) return std::nullopt;
        sarcastic = b_index;
        break;
    }
    default: {  // Third
        std::size_t c_count = 0;
        std::size_t c_index = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (letters[i] == 'C') {
                ++c_count;
                c_index = i;
            } else if (letters[i] != 'A' && letters[i] != 'B') {
                return std::nullopt;
            }
        }
        if (c_count != 1 || c_index < 1) return std::nullopt;
        std::size_t zone_bs = 0;
        std::size_t zone_b_index = 0;
        for (std::size_t i = 1; i < c_index; ++i) {
            if (letters[i] == 'B') {
                ++zone_bs;
                zone_b_index = i;
            }
        }
        if (zone_bs == 0) return std::nullopt;
        sarcastic = c_index;
        if (zone_bs == 1) oblivious = zone_b_index;
        break;
    }
    }

    RoleAssignment roles;
    roles.person = person;
    roles.perspective = perspective_of(person);
    roles.cue_index = 0;
    roles.sarcastic_index = sarcastic;
    roles.oblivious_index = oblivious;
    if (sarcastic + 1 <= n - 1) roles.eliciting_index = sarcastic + 1;
    return roles;
}

PlantedThread generate_thread(PersonClass person, const std::string& sequence_template,
                              std::uint64_t seed) {
    const std::vector<std::string>& cues = cue_bank(person);
    validate_template(sequence_template);

    std::mt19937_64 rng(splitmix64(seed));
    const std::string prefix = "s" + std::to_string(seed);
    const std::size_t n = sequence_template.size();

    std::vector<Tweet> tweets(n);  // cue-first
    for (std::size_t k = 0; k < n; ++k) {
        Tweet& t = tweets[k];
        t.id = prefix + "_t" + std::to_string(k);
        if (k + 1 < n) t.parent_id = prefix + "_t" + std::to_string(k + 1);
        t.author_id = prefix + "_a" + std::to_string(sequence_template[k] - 'A');
        if (k == 0) {
            t.text = cues[rng() % cues.size()];
        } else {
            t.text = kFillerTexts[rng() % kFillerTexts.size()];
        }
        // root (k = n-1) is oldest
        t.created_at =
            format_rfc3339(kTimeBase + static_cast<std::int64_t>(seed % 1000000) * 60 +
                           static_cast<std::int64_t>(n - 1 - k) * 60);
        t.lang = "en";
    }

    PlantedThread planted;
    planted.thread = validate_thread(std::move(tweets));
    planted.planted_person = person;
    if (std::optional<RoleAssignment> roles = oracle_roles(sequence_template, person)) {
        planted.truth = *roles;
    } else {
        planted.truth = ExpectedDiscard{"nomatch"};
    }
    return planted;
}

SynthCorpus generate_corpus(const std::vector<MixEntry>& mix, double ambiguous_fraction,
                            std::uint64_t seed) {
    if (ambiguous_fraction < 0.0 || ambiguous_fraction > 1.0) {
        throw std::invalid_argument("ambiguous_fraction must be within [0, 1]");
    }
    for (const MixEntry& entry : mix) {
        validate_template(entry.sequence_template);
        cue_bank(entry.person);
    }

    SynthCorpus corpus;
    std::uint64_t ordinal = 0;
    for (const MixEntry& entry : mix) {
        const bool matches = oracle_roles(entry.sequence_template, entry.person).has_value();
        const std::size_t ambiguous =
            matches ? static_cast<std::size_t>(
                          std::llround(static_cast<double>(entry.count) * ambiguous_fraction))
                    : 0;
        for (std::size_t i = 0; i < entry.count; ++i) {
            const bool violate = i >= entry.count - ambiguous;
            const std::string& tpl = entry.sequence_template;
            const std::uint64_t thread_seed =
                splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (ordinal + 1)));
            corpus.threads.push_back(generate_thread(
                entry.person, violate ? violated_template(tpl, entry.person) : tpl, thread_seed));
            ++ordinal;
        }
    }
    return corpus;
}

void write_corpus_jsonl(const SynthCorpus& corpus, std::ostream& out) {
    for (const PlantedThread& planted : corpus.threads) {
        const auto& tweets = planted.thread.tweets;
        for (auto it = tweets.rbegin(); it != tweets.rend(); ++it) {  // root first
            out << tweet_to_json(*it).dump() << '\n';
        }
    }
}

void write_truth_jsonl(const SynthCorpus& corpus, std::ostream& out) {
    for (const PlantedThread& planted : corpus.threads) {
        nlohmann::ordered_json j;
        j["thread_root_id"] = planted.thread.root().id;
        nlohmann::ordered_json expected;
        if (const auto* roles = std::get_if<RoleAssignment>(&planted.truth)) {
            expected["person"] = person_number(roles->person);
            expected["sarc_index"] = roles->sarcastic_index;
            if (roles->oblivious_index) expected["obl_index"] = *roles->oblivious_index;
            else expected["obl_index"] = nullptr;
            if (roles->eliciting_index) expected["eli_index"] = *roles->eliciting_index;
            else expected["eli_index"] = nullptr;
        } else {
            expected["discard_reason"] = std::get<ExpectedDiscard>(planted.truth).reason;
        }
        j["expected"] = expected;
        out << j.dump() << '\n';
    }
}

std::vector<TruthRecord> read_truth_jsonl(std::istream& in) {
    std::vector<TruthRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        TruthRecord rec;
        rec.thread_root_id = j.at("thread_root_id").get<std::string>();
        const nlohmann::json& expected = j.at("expected");
        if (expected.contains("discard_reason")) {
            rec.discard_reason = expected["discard_reason"].get<std::string>();
        } else {
            rec.person = person_from_number(expected.at("person").get<int>());
            rec.sarc_index = expected.at("sarc_index").get<std::size_t>();
            if (!expected.at("obl_index").is_null()) {
                rec.obl_index = expected["obl_index"].get<std::size_t>();
            }
            if (!expected.at("eli_index").is_null()) {
                rec.eli_index = expected["eli_index"].get<std::size_t>();
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<MixEntry> load_mix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open mix file: " + path);
    }
    nlohmann::json j;
    in >> j;
    if (!j.is_array()) {
        throw std::invalid_argument("mix file must be a JSON array");
    }
    std::vector<MixEntry> mix;
    for (const auto& item : j) {
        MixEntry entry;
        entry.sequence_template = item.at("template").get<std::string>();
        entry.person = person_from_number(item.at("person").get<int>());
        if (entry.person == PersonClass::Unknown) {
            throw std::invalid_argument("mix entry person must be 1, 2 or 3");
        }
        entry.count = item.at("count").get<std::size_t>();
        mix.push_back(std::move(entry));
    }
    return mix;
}

}  // namespace cueharvest
