//
// Author-sequence role matching.
//
// Each person class owns one anchored pattern over the canonical letter
// string; the capture groups locate the cue, the sarcastic tweet and the
// zones that may hold an oblivious or eliciting tweet. A sequence that does
// not match its class's pattern cannot be labeled unambiguously and the
// whole thread is discarded.
//
//   First:  ^(A)([^A]*)(A)([^A]*)$     cue, oblivious-zone, sarcastic, eliciting-zone
//   Second: ^(A)A*(B)(A*)$             cue, sarcastic, eliciting-zone
//   Third:  ^(A)(A*B[AB]*)(C)([AB]*)$  cue, oblivious-zone, sarcastic, eliciting-zone
//
// Designation rules on a match:
//   - the eliciting tweet is the parent of the sarcastic tweet, so it exists
//     exactly when the eliciting zone is non-empty and sits at sarcastic+1;
//   - First person: the oblivious tweet is the single tweet in the oblivious
//     zone iff that zone has length exactly 1;
//   - Second person: never an oblivious tweet (the cue answers the sarcastic
//     tweet directly);
//   - Third person: the unique B in the oblivious zone iff the zone contains
//     exactly one B.
//

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cueharvest/core.hpp"
#include "cueharvest/sequencer.hpp"

namespace cueharvest {

struct RolePattern {
    PersonClass person;
    std::string pattern_source;             // anchored regular expression
    std::vector<std::string> group_roles;   // role label per capture group
};

struct RoleAssignment {
    PersonClass person = PersonClass::Unknown;
    Perspective perspective = Perspective::Perceived;
    std::size_t cue_index = 0;
    std::size_t sarcastic_index = 0;
    std::optional<std::size_t> oblivious_index;
    std::optional<std::size_t> eliciting_index;

    bool operator==(const RoleAssignment&) const = default;
};

// Throws std::invalid_argument for PersonClass::Unknown.
const RolePattern& pattern_for(PersonClass person);

// nullopt means no match: the thread is discarded.
std::optional<RoleAssignment> match_roles(const std::string& letters, PersonClass person);
std::optional<RoleAssignment> match_roles(const AuthorSequence& sequence, PersonClass person);

}  // namespace cueharvest
