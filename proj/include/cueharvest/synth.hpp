//
// Synthetic conversation generator and an independent role oracle.
//
// oracle_roles re-derives role assignments by counting letters and scanning
// indices directly; it shares no code with the pattern matcher, which is
// what makes matcher-vs-oracle agreement a meaningful check. The generator
// plants threads whose canonical author sequence equals a template and
// records the expected outcome at generation time.
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cueharvest/core.hpp"
#include "cueharvest/matcher.hpp"

namespace cueharvest {

class InvalidTemplateError : public std::runtime_error {
public:
    explicit InvalidTemplateError(const std::string& message) : std::runtime_error(message) {}
};

// Constraint-based counterpart of match_roles. No regular expressions:
//   First:  sequence starts with A and contains exactly two A's;
//           the sarcastic tweet is the second A.
//   Second: starts with A, alphabet within {A,B}, exactly one B at index >= 1;
//           the sarcastic tweet is that B.
//   Third:  starts with A, exactly one C, every non-C letter in {A,B}, and
//           some B strictly between the cue and the C; the sarcastic tweet
//           is the C.
// Oblivious/eliciting follow the matcher's designation rules, computed by
// index scanning.
std::optional<RoleAssignment> oracle_roles(const std::string& letters, PersonClass person);

struct ExpectedDiscard {
    std::string reason;

    bool operator==(const ExpectedDiscard&) const = default;
};

struct PlantedThread {
    ConversationThread thread;
    std::variant<RoleAssignment, ExpectedDiscard> truth;  // fixed at generation time
    PersonClass planted_person = PersonClass::Unknown;
};

// Thread whose canonicalize() equals the template and whose cue classifies
// to `person`. Templates must start with 'A' and introduce letters in
// alphabetical order; anything else throws InvalidTemplateError.
PlantedThread generate_thread(PersonClass person, const std::string& sequence_template,
                              std::uint64_t seed);

struct MixEntry {
    std::string sequence_template;
    PersonClass person = PersonClass::Unknown;
    std::size_t count = 0;
};

struct SynthCorpus {
    std::vector<PlantedThread> threads;
};

// ambiguous_fraction of each entry's threads get a sequence mutated to
// violate the entry's pattern (one extra A/B/C), so their truth is
// ExpectedDiscard. Identical seeds produce byte-identical corpora.
SynthCorpus generate_corpus(const std::vector<MixEntry>& mix, double ambiguous_fraction,
                            std::uint64_t seed);

// Corpus file: one tweet per line in the corpus record schema, threads
// written root-first. Truth file: one record per thread.
void write_corpus_jsonl(const SynthCorpus& corpus, std::ostream& out);
void write_truth_jsonl(const SynthCorpus& corpus, std::ostream& out);

struct TruthRecord {
    std::string thread_root_id;
    std::optional<PersonClass> person;  // nullopt => expected discard
    std::size_t sarc_index = 0;
    std::optional<std::size_t> obl_index;
    std::optional<std::size_t> eli_index;
    std::string discard_reason;
};

std::vector<TruthRecord> read_truth_jsonl(std::istream& in);

// Mix file: JSON array of {"template": "ABAC", "person": 1, "count": 100}.
std::vector<MixEntry> load_mix_file(const std::string& path);

}  // namespace cueharvest
