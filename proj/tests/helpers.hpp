// Shared fixture builders for the test suites.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "cueharvest/core.hpp"

namespace cueharvest::testing {

inline Tweet make_tweet(std::string id, std::optional<std::string> parent, std::string author,
                        std::string text, std::int64_t epoch = 1570000000,
                        std::string lang = "en") {
    Tweet t;
    t.id = std::move(id);
    t.parent_id = std::move(parent);
    t.author_id = std::move(author);
    t.text = std::move(text);
    t.created_at = format_rfc3339(epoch);
    t.lang = std::move(lang);
    return t;
}

// Cue-first chain over (author, text) pairs; ids t0 (cue) .. tN-1 (root).
inline std::vector<Tweet> make_chain(const std::vector<std::pair<std::string, std::string>>& turns,
                                     const std::string& id_prefix = "t") {
    std::vector<Tweet> tweets;
    const std::size_t n = turns.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::optional<std::string> parent;
        if (k + 1 < n) parent = id_prefix + std::to_string(k + 1);
        tweets.push_back(make_tweet(id_prefix + std::to_string(k), parent, turns[k].first,
                                    turns[k].second,
                                    1570000000 + static_cast<std::int64_t>(n - 1 - k) * 60));
    }
    return tweets;
}

class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        for (;;) {
            path_ = base / ("cueharvest_test_" + std::to_string(rng()));
            if (std::filesystem::create_directory(path_)) break;
        }
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        const std::string p = file(name);
        std::ofstream out(p);
        out << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace cueharvest::testing
