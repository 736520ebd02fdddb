//
// Canonical author sequences: the thread's authors rewritten as letters
// A, B, C, ... in order of first appearance, cue author first. Index 0 is
// always 'A', and a role's string index equals its cue lag.
//

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cueharvest/core.hpp"

namespace cueharvest {

class TooManyAuthorsError : public std::runtime_error {
public:
    explicit TooManyAuthorsError(const std::string& message) : std::runtime_error(message) {}
};

struct AuthorSequence {
    std::string letters;               // letters[0] == 'A'
    std::vector<std::string> authors;  // letter index -> raw author id

    char letter_for(const std::string& author_id) const;
    const std::string& author_for(char letter) const;

    bool operator==(const AuthorSequence&) const = default;
};

// Deterministic relabeling; throws TooManyAuthorsError past 26 authors.
AuthorSequence canonicalize(const ConversationThread& thread);

struct PositionInfo {
    std::size_t position;  // distance of the sarcastic tweet from the root
    std::size_t cue_lag;   // distance from the cue down to the sarcastic tweet

    bool operator==(const PositionInfo&) const = default;
};

// For a cue-first sequence of length n with the sarcastic tweet at string
// index j: cue_lag == j and position == n - 1 - j. Requires 1 <= j <= n-1;
// throws std::out_of_range otherwise.
PositionInfo positions_of(std::size_t sequence_length, std::size_t sarcastic_index);

}  // namespace cueharvest
