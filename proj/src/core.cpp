#include "cueharvest/core.hpp"

#include <cstdio>
#include <unordered_set>

namespace cueharvest {

Perspective perspective_of(PersonClass person) {
    switch (person) {
    case PersonClass::First:
        return Perspective::Intended;
    case PersonClass::Second:
    case PersonClass::Third:
        return Perspective::Perceived;
    default:
        throw std::invalid_argument("perspective_of: unknown person class has no perspective");
    }
}

int person_number(PersonClass person) {
    switch (person) {
    case PersonClass::First: return 1;
    case PersonClass::Second: return 2;
    case PersonClass::Third: return 3;
    default: return 0;
    }
}

PersonClass person_from_number(int n) {
    switch (n) {
    case 1: return PersonClass::First;
    case 2: return PersonClass::Second;
    case 3: return PersonClass::Third;
    default: return PersonClass::Unknown;
    }
}

const char* to_string(PersonClass person) {
    switch (person) {
    case PersonClass::First: return "first";
    case PersonClass::Second: return "second";
    case PersonClass::Third: return "third";
    default: return "unknown";
    }
}

const char* to_string(Perspective perspective) {
    return perspective == Perspective::Intended ? "intended" : "perceived";
}

ConversationThread validate_thread(std::vector<Tweet> tweets) {
    if (tweets.empty()) {
        throw std::invalid_argument("validate_thread: empty tweet list");
    }

    std::unordered_set<std::string> ids;
    ids.reserve(tweets.size());
    for (const Tweet& t : tweets) {
        if (t.id.empty()) {
            throw ThreadError(ThreadErrorKind::BrokenChain, "tweet with empty id");
        }
        if (!ids.insert(t.id).second) {
            throw ThreadError(ThreadErrorKind::DuplicateId, "duplicate tweet id: " + t.id);
        }
    }

    const std::size_t n = tweets.size();
    // ids seen at index <= k; a parent pointing back into this set closes a loop
    std::unordered_set<std::string> newer;
    for (std::size_t k = 0; k < n; ++k) {
        const Tweet& t = tweets[k];
        newer.insert(t.id);
        const bool last = (k + 1 == n);
        if (!t.parent_id.has_value()) {
            if (!last) {
                throw ThreadError(ThreadErrorKind::BrokenChain,
                                  "rootless tweet before the end of the chain: " + t.id);
            }
            continue;
        }
        const std::string& parent = *t.parent_id;
        if (newer.contains(parent)) {
            throw ThreadError(ThreadErrorKind::CycleDetected,
                              "tweet " + t.id + " transitively replies to itself");
        }
        if (last) {
            throw ThreadError(ThreadErrorKind::BrokenChain,
                              "last tweet " + t.id + " is not a root (parent " + parent + " missing)");
        }
        if (parent != tweets[k + 1].id) {
            throw ThreadError(ThreadErrorKind::BrokenChain,
                              "tweet " + t.id + " replies to " + parent + ", expected " + tweets[k + 1].id);
        }
    }

    return ConversationThread{std::move(tweets)};
}

namespace {

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool days_in_month_ok(int y, int m, int d) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    int max = lengths[m - 1];
    if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) max = 29;
    return d <= max;
}

}  // namespace

std::optional<std::int64_t> parse_rfc3339(const std::string& s) {
    int y, mo, d, h, mi, se;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%*1[Tt]%2d:%2d:%2d%n",
                    &y, &mo, &d, &h, &mi, &se, &consumed) != 6 || consumed == 0) {
        return std::nullopt;
    }
    if (!days_in_month_ok(y, mo, d) || h > 23 || mi > 59 || se > 60 || h < 0 || mi < 0 || se < 0) {
        return std::nullopt;
    }
    std::size_t pos = static_cast<std::size_t>(consumed);

    // skip fractional seconds
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') { ++pos; ++digits; }
        if (digits == 0) return std::nullopt;
    }

    std::int64_t offset = 0;
    if (pos >= s.size()) return std::nullopt;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int oh, om;
        int sign = (s[pos] == '-') ? -1 : 1;
        int oc = 0;
        if (std::sscanf(s.c_str() + pos + 1, "%2d:%2d%n", &oh, &om, &oc) != 2 || oc != 5) {
            return std::nullopt;
        }
        if (oh > 23 || om > 59) return std::nullopt;
        offset = sign * (oh * 3600LL + om * 60LL);
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != s.size()) return std::nullopt;

    const std::int64_t days = days_from_civil(y, mo, d);
    return days * 86400 + h * 3600 + mi * 60 + se - offset;
}

std::string format_rfc3339(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) { rem += 86400; --days; }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace cueharvest
