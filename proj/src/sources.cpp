#include "cueharvest/sources.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "cueharvest/cue_classifier.hpp"

namespace cueharvest {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<std::size_t> parse_cursor(const std::optional<std::string>& cursor) {
    if (!cursor || cursor->empty()) return 0;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(cursor->data(), cursor->data() + cursor->size(), value);
    if (ec != std::errc{} || ptr != cursor->data() + cursor->size()) return std::nullopt;
    return value;
}

int parse_config_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw SourceError(SourceErrorKind::Unavailable,
                          "config key '" + key + "' needs an integer, got: " + value);
    }
    return out;
}

}  // namespace

SourceConfig load_source_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SourceError(SourceErrorKind::Unavailable, "cannot open source config: " + path);
    }
    SourceConfig cfg;
    bool kind_seen = false;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw SourceError(SourceErrorKind::Unavailable,
                              "bad config line (expected key = value): " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "kind") {
            kind_seen = true;
            if (value == "file") cfg.kind = SourceKind::FileCorpus;
            else if (value == "http") cfg.kind = SourceKind::HttpApi;
            else throw SourceError(SourceErrorKind::Unavailable, "unknown source kind: " + value);
        } else if (key == "path") cfg.path = value;
        else if (key == "query") cfg.query = value;
        else if (key == "lang_filter") cfg.lang_filter = value;
        else if (key == "page_size") cfg.page_size = parse_config_int(key, value);
        else if (key == "search_url") cfg.search_url = value;
        else if (key == "lookup_url") cfg.lookup_url = value;
        else if (key == "auth_header") cfg.auth_header = value;
        else if (key == "auth_env") cfg.auth_env = value;
        else if (key == "rate_limit") cfg.rate_limit = parse_config_int(key, value);
        else if (key == "rate_window_ms") cfg.rate_window_ms = parse_config_int(key, value);
        else if (key == "max_retries") cfg.max_retries = parse_config_int(key, value);
        else if (key == "backoff_base_ms") cfg.backoff_base_ms = parse_config_int(key, value);
        else if (key == "field_id") cfg.fields.id = value;
        else if (key == "field_parent") cfg.fields.parent = value;
        else if (key == "field_author") cfg.fields.author = value;
        else if (key == "field_text") cfg.fields.text = value;
        else if (key == "field_time") cfg.fields.time = value;
        else if (key == "field_lang") cfg.fields.lang = value;
        else if (key == "search_results_key") cfg.fields.search_results = value;
        else if (key == "search_cursor_key") cfg.fields.search_cursor = value;
        else {
            throw SourceError(SourceErrorKind::Unavailable, "unknown config key: " + key);
        }
    }
    if (!kind_seen) {
        throw SourceError(SourceErrorKind::Unavailable, "source config missing 'kind'");
    }
    if (cfg.kind == SourceKind::FileCorpus && cfg.path.empty()) {
        throw SourceError(SourceErrorKind::Unavailable, "file source config missing 'path'");
    }
    if (cfg.kind == SourceKind::HttpApi) {
        if (cfg.search_url.empty() || cfg.lookup_url.empty()) {
            throw SourceError(SourceErrorKind::Unavailable,
                              "http source config needs search_url and lookup_url");
        }
        if (cfg.rate_limit <= 0) {
            throw SourceError(SourceErrorKind::Unavailable, "rate_limit must be positive");
        }
    }
    if (cfg.page_size <= 0) {
        throw SourceError(SourceErrorKind::Unavailable, "page_size must be positive");
    }
    return cfg;
}

nlohmann::ordered_json tweet_to_json(const Tweet& tweet) {
    nlohmann::ordered_json j;
    j["id"] = tweet.id;
    if (tweet.parent_id) j["parent_id"] = *tweet.parent_id;
    else j["parent_id"] = nullptr;
    j["author_id"] = tweet.author_id;
    j["text"] = tweet.text;
    j["created_at"] = tweet.created_at;
    j["lang"] = tweet.lang;
    return j;
}

std::optional<Tweet> tweet_from_json(const nlohmann::json& record, bool& malformed) {
    malformed = false;
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string() ||
        record["id"].get<std::string>().empty()) {
        return std::nullopt;
    }
    Tweet t;
    t.id = record["id"].get<std::string>();

    const auto bad = [&]() -> std::optional<Tweet> {
        malformed = true;
        Tweet stub;
        stub.id = t.id;
        return stub;
    };

    if (!record.contains("parent_id") ||
        !(record["parent_id"].is_null() || record["parent_id"].is_string())) {
        return bad();
    }
    if (record["parent_id"].is_string()) {
        std::string parent = record["parent_id"].get<std::string>();
        if (parent.empty()) return bad();
        t.parent_id = std::move(parent);
    }
    if (!record.contains("author_id") || !record["author_id"].is_string() ||
        record["author_id"].get<std::string>().empty()) {
        return bad();
    }
    t.author_id = record["author_id"].get<std::string>();
    if (!record.contains("text") || !record["text"].is_string()) return bad();
    t.text = record["text"].get<std::string>();
    if (!record.contains("created_at") || !record["created_at"].is_string()) return bad();
    t.created_at = record["created_at"].get<std::string>();
    if (!parse_rfc3339(t.created_at)) return bad();
    if (!record.contains("lang") || !record["lang"].is_string()) return bad();
    t.lang = record["lang"].get<std::string>();
    return t;
}

// ---------------------------------------------------------------------------
// FileCorpusSource

FileCorpusSource::FileCorpusSource(SourceConfig config) : config_(std::move(config)) {
    std::ifstream in(config_.path);
    if (!in) {
        throw SourceError(SourceErrorKind::Unavailable, "cannot open corpus: " + config_.path);
    }
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded()) {
            ++diags_.unparseable_lines;
            continue;
        }
        bool malformed = false;
        std::optional<Tweet> t = tweet_from_json(record, malformed);
        if (!t) {
            ++diags_.unparseable_lines;
            continue;
        }
        if (malformed) {
            ++diags_.invalid_records;
            malformed_ids_.insert(t->id);
            continue;
        }
        if (by_id_.contains(t->id) || malformed_ids_.contains(t->id)) {
            ++diags_.duplicate_ids;
            continue;
        }
        by_id_.emplace(t->id, tweets_.size());
        tweets_.push_back(std::move(*t));
    }
}

FileCorpusSource FileCorpusSource::from_path(const std::string& path, int page_size) {
    SourceConfig cfg;
    cfg.kind = SourceKind::FileCorpus;
    cfg.path = path;
    cfg.page_size = page_size;
    return FileCorpusSource(std::move(cfg));
}

TweetPage FileCorpusSource::search_cues(const std::string& query,
                                        const std::optional<std::string>& lang,
                                        const std::optional<std::string>& cursor) {
    const auto start = parse_cursor(cursor);
    if (!start) {
        throw SourceError(SourceErrorKind::Unavailable, "bad cursor: " + cursor.value_or(""));
    }
    const std::optional<std::string>& effective_lang = lang ? lang : config_.lang_filter;
    TweetPage page;
    std::size_t i = *start;
    while (i < tweets_.size() && page.tweets.size() < static_cast<std::size_t>(config_.page_size)) {
        const Tweet& t = tweets_[i];
        ++i;
        if (effective_lang && t.lang != *effective_lang) continue;
        if (!contains_phrase(t.text, query)) continue;
        page.tweets.push_back(t);
    }
    if (i < tweets_.size()) page.next_cursor = std::to_string(i);
    return page;
}

std::optional<Tweet> FileCorpusSource::lookup_tweet(const std::string& id) {
    if (malformed_ids_.contains(id)) {
        throw SourceError(SourceErrorKind::MalformedRecord, "malformed record for id: " + id);
    }
    const auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return tweets_[it->second];
}

TweetPage FileCorpusSource::scan(const std::optional<std::string>& cursor) {
    const auto start = parse_cursor(cursor);
    if (!start) {
        throw SourceError(SourceErrorKind::Unavailable, "bad cursor: " + cursor.value_or(""));
    }
    TweetPage page;
    const std::size_t end =
        std::min(tweets_.size(), *start + static_cast<std::size_t>(config_.page_size));
    page.tweets.assign(tweets_.begin() + static_cast<std::ptrdiff_t>(*start),
                       tweets_.begin() + static_cast<std::ptrdiff_t>(end));
    if (end < tweets_.size()) page.next_cursor = std::to_string(end);
    return page;
}

// ---------------------------------------------------------------------------
// HttpApiSource

namespace {

std::string url_encode(const std::string& value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(value.size());
    for (const unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::string substitute(std::string tmpl, const std::string& key, const std::string& value) {
    const std::string token = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = tmpl.find(token, pos)) != std::string::npos) {
        tmpl.replace(pos, token.size(), value);
        pos += value.size();
    }
    return tmpl;
}

// "http://host:port/path?x=y" -> {"http://host:port", "/path?x=y"}
std::pair<std::string, std::string> split_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    if (scheme == std::string::npos) {
        throw SourceError(SourceErrorKind::Unavailable, "url without scheme: " + url);
    }
    const std::size_t path = url.find('/', scheme + 3);
    if (path == std::string::npos) return {url, "/"};
    return {url.substr(0, path), url.substr(path)};
}

}  // namespace

struct HttpApiSource::Impl {
    SourceConfig config;
    std::mutex mutex;  // serializes dispatch: one global request budget
    std::deque<std::chrono::steady_clock::time_point> window;
    std::atomic<std::size_t> dropped{0};

    void wait_for_slot() {
        const auto window_len = std::chrono::milliseconds(config.rate_window_ms);
        for (;;) {
            auto now = std::chrono::steady_clock::now();
            while (!window.empty() && now - window.front() >= window_len) {
                window.pop_front();
            }
            if (window.size() < static_cast<std::size_t>(config.rate_limit)) {
                window.push_back(now);
                return;
            }
            std::this_thread::sleep_until(window.front() + window_len);
        }
    }

    httplib::Headers headers() const {
        httplib::Headers h;
        if (!config.auth_header.empty() && !config.auth_env.empty()) {
            if (const char* value = std::getenv(config.auth_env.c_str())) {
                h.emplace(config.auth_header, value);
            }
        }
        return h;
    }

    // Retries connection failures, 429 and 5xx with exponential backoff;
    // anything else is a definitive response.
    httplib::Result request(const std::string& url) {
        std::lock_guard<std::mutex> lock(mutex);
        const auto [origin, path] = split_url(url);
        bool rate_limited = false;
        for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
            if (attempt > 0) {
                const auto delay =
                    std::chrono::milliseconds(config.backoff_base_ms) * (1LL << (attempt - 1));
                std::this_thread::sleep_for(delay);
            }
            wait_for_slot();
            httplib::Client client(origin);
            client.set_connection_timeout(5);
            client.set_read_timeout(10);
            httplib::Result res = client.Get(path, headers());
            if (!res) {
                rate_limited = false;
                continue;
            }
            if (res->status == 429) {
                rate_limited = true;
                continue;
            }
            if (res->status >= 500) {
                rate_limited = false;
                continue;
            }
            return res;
        }
        if (rate_limited) {
            throw SourceError(SourceErrorKind::RateLimited,
                              "rate limited after " + std::to_string(config.max_retries) +
                                  " retries: " + url);
        }
        throw SourceError(SourceErrorKind::Unavailable, "source unavailable: " + url);
    }

    nlohmann::json get_json(const std::string& url) {
        httplib::Result res = request(url);
        if (res->status != 200) {
            throw SourceError(SourceErrorKind::Unavailable,
                              "unexpected status " + std::to_string(res->status) + ": " + url);
        }
        nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
        if (body.is_discarded()) {
            throw SourceError(SourceErrorKind::Unavailable, "response is not JSON: " + url);
        }
        return body;
    }

    std::optional<Tweet> map_tweet(const nlohmann::json& record) {
        if (!record.is_object()) {
            ++dropped;
            return std::nullopt;
        }
        nlohmann::json canonical;
        const FieldMap& f = config.fields;
        canonical["id"] = record.contains(f.id) ? record[f.id] : nlohmann::json();
        canonical["parent_id"] = record.contains(f.parent) ? record[f.parent] : nlohmann::json();
        canonical["author_id"] = record.contains(f.author) ? record[f.author] : nlohmann::json();
        canonical["text"] = record.contains(f.text) ? record[f.text] : nlohmann::json();
        canonical["created_at"] = record.contains(f.time) ? record[f.time] : nlohmann::json();
        canonical["lang"] = record.contains(f.lang) ? record[f.lang] : nlohmann::json();
        bool malformed = false;
        std::optional<Tweet> t = tweet_from_json(canonical, malformed);
        if (!t || malformed) {
            ++dropped;
            return std::nullopt;
        }
        return t;
    }
};

HttpApiSource::HttpApiSource(SourceConfig config) : impl_(std::make_unique<Impl>()) {
    if (config.rate_limit <= 0) {
        throw SourceError(SourceErrorKind::Unavailable, "rate_limit must be positive");
    }
    impl_->config = std::move(config);
}

HttpApiSource::~HttpApiSource() = default;

std::size_t HttpApiSource::dropped_records() const { return impl_->dropped.load(); }

TweetPage HttpApiSource::search_cues(const std::string& query,
                                     const std::optional<std::string>& lang,
                                     const std::optional<std::string>& cursor) {
    const SourceConfig& cfg = impl_->config;
    std::string url = substitute(cfg.search_url, "query", url_encode(query));
    url = substitute(url, "cursor", cursor ? url_encode(*cursor) : "");
    const std::optional<std::string>& effective_lang = lang ? lang : cfg.lang_filter;
    url = substitute(url, "lang", effective_lang ? url_encode(*effective_lang) : "");

    const nlohmann::json body = impl_->get_json(url);
    TweetPage page;
    if (body.contains(cfg.fields.search_results) && body[cfg.fields.search_results].is_array()) {
        for (const auto& record : body[cfg.fields.search_results]) {
            std::optional<Tweet> t = impl_->map_tweet(record);
            if (!t) continue;
            // post-filter locally in case the backend does not honor these
            if (!contains_phrase(t->text, query)) continue;
            if (effective_lang && t->lang != *effective_lang) continue;
            page.tweets.push_back(std::move(*t));
        }
    }
    if (body.contains(cfg.fields.search_cursor) && body[cfg.fields.search_cursor].is_string()) {
        const std::string next = body[cfg.fields.search_cursor].get<std::string>();
        if (!next.empty()) page.next_cursor = next;
    }
    return page;
}

std::optional<Tweet> HttpApiSource::lookup_tweet(const std::string& id) {
    const std::string url = substitute(impl_->config.lookup_url, "id", url_encode(id));
    httplib::Result res = impl_->request(url);
    if (res->status == 404) return std::nullopt;
    if (res->status != 200) {
        throw SourceError(SourceErrorKind::Unavailable,
                          "unexpected status " + std::to_string(res->status) + ": " + url);
    }
    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded()) {
        throw SourceError(SourceErrorKind::Unavailable, "response is not JSON: " + url);
    }
    std::optional<Tweet> t = impl_->map_tweet(body);
    if (!t) {
        throw SourceError(SourceErrorKind::MalformedRecord, "malformed record for id: " + id);
    }
    return t;
}

TweetPage HttpApiSource::scan(const std::optional<std::string>&) {
    throw SourceError(SourceErrorKind::Unavailable,
                      "http sources cannot enumerate the corpus; use a file corpus");
}

std::unique_ptr<ConversationSource> open_source(const SourceConfig& config) {
    if (config.kind == SourceKind::FileCorpus) {
        return std::make_unique<FileCorpusSource>(config);
    }
    return std::make_unique<HttpApiSource>(config);
}

}  // namespace cueharvest
