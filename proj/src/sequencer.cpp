#include "cueharvest/sequencer.hpp"

#include <algorithm>

namespace cueharvest {

char AuthorSequence::letter_for(const std::string& author_id) const {
    const auto it = std::find(authors.begin(), authors.end(), author_id);
    if (it == authors.end()) {
        throw std::out_of_range("letter_for: author not in sequence: " + author_id);
    }
    return static_cast<char>('A' + (it - authors.begin()));
}

const std::string& AuthorSequence::author_for(char letter) const {
    const std::size_t idx = static_cast<std::size_t>(letter - 'A');
    if (letter < 'A' || idx >= authors.size()) {
        throw std::out_of_range(std::string("author_for: letter not in sequence: ") + letter);
    }
    return authors[idx];
}

AuthorSequence canonicalize(const ConversationThread& thread) {
    AuthorSequence seq;
    seq.letters.reserve(thread.length());
    for (const Tweet& t : thread.tweets) {
        const auto it = std::find(seq.authors.begin(), seq.authors.end(), t.author_id);
        std::size_t idx;
        if (it == seq.authors.end()) {
            if (seq.authors.size() >= 26) {
                throw TooManyAuthorsError("canonicalize: more than 26 distinct authors");
            }
            idx = seq.authors.size();
            seq.authors.push_back(t.author_id);
        } else {
            idx = static_cast<std::size_t>(it - seq.authors.begin());
        }
        seq.letters.push_back(static_cast<char>('A' + idx));
    }
    return seq;
}

PositionInfo positions_of(std::size_t sequence_length, std::size_t sarcastic_index) {
    if (sarcastic_index < 1 || sarcastic_index >= sequence_length) {
        throw std::out_of_range("positions_of: sarcastic index outside [1, n-1]");
    }
    return {sequence_length - 1 - sarcastic_index, sarcastic_index};
}

}  // namespace cueharvest
