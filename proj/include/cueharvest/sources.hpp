//
// Conversation sources: where cue candidates and parent tweets come from.
//
// Two backends share one interface. FileCorpusSource reads a JSON Lines
// corpus into memory and is fully deterministic; HttpApiSource talks to a
// generic search+lookup JSON API through configurable URL templates with a
// global rate limit and retry/backoff. Records that fail the tweet schema
// are dropped and counted at the boundary; callers never see them.
//
// Corpus record schema (one object per line):
//   {"id": string, "parent_id": string|null, "author_id": string,
//    "text": string, "created_at": RFC 3339 string, "lang": string}
//

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "cueharvest/core.hpp"
#include "cueharvest/cue_classifier.hpp"

namespace cueharvest {

enum class SourceErrorKind { Unavailable, RateLimited, MalformedRecord };

class SourceError : public std::runtime_error {
public:
    SourceError(SourceErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    SourceErrorKind kind() const { return kind_; }

private:
    SourceErrorKind kind_;
};

enum class SourceKind { FileCorpus, HttpApi };

// JSON field names of the remote API's tweet objects.
struct FieldMap {
    std::string id = "id";
    std::string parent = "parent_id";
    std::string author = "author_id";
    std::string text = "text";
    std::string time = "created_at";
    std::string lang = "lang";
    std::string search_results = "results";
    std::string search_cursor = "next_cursor";
};

struct SourceConfig {
    SourceKind kind = SourceKind::FileCorpus;
    std::string path;  // file corpus location
    std::string query = kCueQueryPhrase;
    std::optional<std::string> lang_filter;
    int page_size = 100;

    // http only; URL templates take {query}, {cursor}, {lang} and {id}
    std::string search_url;
    std::string lookup_url;
    std::string auth_header;  // header name
    std::string auth_env;     // environment variable holding the header value
    int rate_limit = 10;      // requests per window
    int rate_window_ms = 1000;
    int max_retries = 3;
    int backoff_base_ms = 250;
    FieldMap fields;
};

// Keyed text config, one "key = value" per line, '#' comments.
SourceConfig load_source_config(const std::string& path);

struct TweetPage {
    std::vector<Tweet> tweets;
    std::optional<std::string> next_cursor;
};

class ConversationSource {
public:
    virtual ~ConversationSource() = default;

    // Tweets whose text contains the query phrase (and matching lang when
    // given), paginated through opaque cursors.
    virtual TweetPage search_cues(const std::string& query,
                                  const std::optional<std::string>& lang,
                                  const std::optional<std::string>& cursor) = 0;

    // nullopt when the tweet is deleted or unknown. Throws
    // SourceError{MalformedRecord} when the id exists but its record does
    // not satisfy the tweet schema.
    virtual std::optional<Tweet> lookup_tweet(const std::string& id) = 0;

    // Sequential pass over the whole corpus. Sources that cannot enumerate
    // (the HTTP API) throw SourceError{Unavailable}.
    virtual TweetPage scan(const std::optional<std::string>& cursor) = 0;
};

nlohmann::ordered_json tweet_to_json(const Tweet& tweet);

// nullopt when the object is not even a JSON object with a usable id.
// A present id with an otherwise invalid record reports via `malformed`.
std::optional<Tweet> tweet_from_json(const nlohmann::json& record, bool& malformed);

class FileCorpusSource : public ConversationSource {
public:
    explicit FileCorpusSource(SourceConfig config);

    static FileCorpusSource from_path(const std::string& path, int page_size = 100);

    TweetPage search_cues(const std::string& query, const std::optional<std::string>& lang,
                          const std::optional<std::string>& cursor) override;
    std::optional<Tweet> lookup_tweet(const std::string& id) override;
    TweetPage scan(const std::optional<std::string>& cursor) override;

    struct LoadDiagnostics {
        std::size_t unparseable_lines = 0;  // not a JSON object / no usable id
        std::size_t invalid_records = 0;    // id known, schema violated
        std::size_t duplicate_ids = 0;
    };

    const LoadDiagnostics& diagnostics() const { return diags_; }
    std::size_t size() const { return tweets_.size(); }

private:
    SourceConfig config_;
    std::vector<Tweet> tweets_;  // valid records, file order
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_set<std::string> malformed_ids_;
    LoadDiagnostics diags_;
};

class HttpApiSource : public ConversationSource {
public:
    explicit HttpApiSource(SourceConfig config);
    ~HttpApiSource() override;

    TweetPage search_cues(const std::string& query, const std::optional<std::string>& lang,
                          const std::optional<std::string>& cursor) override;
    std::optional<Tweet> lookup_tweet(const std::string& id) override;
    TweetPage scan(const std::optional<std::string>& cursor) override;

    std::size_t dropped_records() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::unique_ptr<ConversationSource> open_source(const SourceConfig& config);

}  // namespace cueharvest
