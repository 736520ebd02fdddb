//
// Rule-based grammatical-person classification of cue texts.
//
// A cue candidate contains the query phrase "being sarcastic". The subject
// pronoun governing that phrase is resolved from a short window of tokens
// immediately before it; anything ambiguous (negation, competing pronouns,
// mention in the subject slot, plural subject) is classified Unknown so the
// harvested labels stay precise. Unknown is a value, never an error.
//

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cueharvest/core.hpp"

namespace cueharvest {

// Query phrase that makes a tweet a cue candidate.
inline constexpr const char* kCueQueryPhrase = "being sarcastic";

enum class CueReason {
    Classified,
    NoPronoun,
    MultiplePronouns,
    NegationPresent,
    MentionSubject,
    PluralPronoun,
    NoQueryPhrase,
};

const char* to_string(CueReason reason);

struct CueDecision {
    PersonClass person = PersonClass::Unknown;
    std::optional<std::string> matched_pronoun;  // set iff reason == Classified
    CueReason reason = CueReason::NoQueryPhrase;

    bool operator==(const CueDecision&) const = default;
};

// ASCII case-fold, map curly apostrophes to ASCII, collapse whitespace runs
// to single spaces.
std::string normalize_text(const std::string& text);

// True iff text contains phrase after both are normalized.
bool contains_phrase(const std::string& text, const std::string& phrase);

// True iff text contains the cue query phrase.
bool is_cue_candidate(const std::string& text);

// Lowercased tokens. Words keep apostrophes, '@', '#', '/' and '_'
// (contractions, mentions, hashtags, "s/he"); each run of other punctuation
// is a token of its own, and punctuation tokens count toward window sizes.
std::vector<std::string> tokenize(const std::string& text);

// Deterministic, pure. See module header for the decision rules.
CueDecision classify_cue(const std::string& text);

}  // namespace cueharvest
