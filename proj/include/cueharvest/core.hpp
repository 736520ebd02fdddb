//
// Core conversation-thread types shared by every other module.
//
// A thread is a single reply chain stored cue-first: tweets[0] is the most
// recent tweet (the cue candidate) and tweets.back() is the root, so that a
// tweet's list index equals its distance from the cue. Reply links are the
// only ordering authority; timestamps are carried as metadata and never
// consulted for ordering (platform clocks skew).
//

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cueharvest {

struct Tweet {
    std::string id;
    std::optional<std::string> parent_id;  // absent <=> root tweet
    std::string author_id;
    std::string text;
    std::string created_at;  // RFC 3339, UTC
    std::string lang;        // ISO 639-1

    bool is_root() const { return !parent_id.has_value(); }

    bool operator==(const Tweet&) const = default;
};

// Grammatical person of the cue's subject pronoun. Unknown marks a cue the
// classifier refuses to commit to; it never reaches an emitted instance.
enum class PersonClass { First, Second, Third, Unknown };

enum class Perspective { Intended, Perceived };

// First => Intended, Second/Third => Perceived. Throws on Unknown.
Perspective perspective_of(PersonClass person);

// 1/2/3 for First/Second/Third, 0 for Unknown.
int person_number(PersonClass person);
PersonClass person_from_number(int n);

const char* to_string(PersonClass person);
const char* to_string(Perspective perspective);

enum class ThreadErrorKind { BrokenChain, CycleDetected, DuplicateId };

class ThreadError : public std::runtime_error {
public:
    ThreadError(ThreadErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ThreadErrorKind kind() const { return kind_; }

private:
    ThreadErrorKind kind_;
};

struct ConversationThread {
    std::vector<Tweet> tweets;  // [cue, ..., root]

    std::size_t length() const { return tweets.size(); }
    const Tweet& cue() const { return tweets.front(); }
    const Tweet& root() const { return tweets.back(); }

    bool operator==(const ConversationThread&) const = default;
};

// Checks the chain equations without reordering anything: every tweet but
// the last must reply to its successor, exactly the last tweet is rootless,
// ids are unique and no tweet transitively replies to itself.
// Throws ThreadError on violation, std::invalid_argument on an empty list.
ConversationThread validate_thread(std::vector<Tweet> tweets);

// RFC 3339 timestamp helpers. Parsing accepts fractional seconds and a
// trailing 'Z' or numeric offset; formatting always emits Zulu time.
std::optional<std::int64_t> parse_rfc3339(const std::string& s);
std::string format_rfc3339(std::int64_t epoch_seconds);

}  // namespace cueharvest
