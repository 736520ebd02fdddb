#include "cueharvest/cue_classifier.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace cueharvest {

const char* to_string(CueReason reason) {
    switch (reason) {
    case CueReason::Classified: return "classified";
    case CueReason::NoPronoun: return "no_pronoun";
    case CueReason::MultiplePronouns: return "multiple_pronouns";
    case CueReason::NegationPresent: return "negation_present";
    case CueReason::MentionSubject: return "mention_subject";
    case CueReason::PluralPronoun: return "plural_pronoun";
    case CueReason::NoQueryPhrase: return "no_query_phrase";
    }
    return "no_query_phrase";
}

namespace {

// Subject pronoun lexicons, window and negation rules. The window is the 4
// tokens before the first "being sarcastic"; negation is only honored in the
// 2 tokens right before "being" so that e.g. "had no idea he was being
// sarcastic" still classifies while "wasn't being sarcastic" is rejected.
constexpr std::size_t kSubjectWindow = 4;
constexpr std::size_t kNegationWindow = 2;

const std::array<const char*, 5> kFirst = {"i", "i'm", "im", "i've", "i'd"};
const std::array<const char*, 5> kSecond = {"you", "u", "ya", "you're", "ur"};
const std::array<const char*, 5> kThird = {"she", "he", "s/he", "she's", "he's"};
const std::array<const char*, 3> kPlural = {"we", "they", "y'all"};

template <std::size_t N>
bool in(const std::array<const char*, N>& lexicon, const std::string& token) {
    return std::any_of(lexicon.begin(), lexicon.end(),
                       [&](const char* entry) { return token == entry; });
}

PersonClass singular_class(const std::string& token) {
    if (in(kFirst, token)) return PersonClass::First;
    if (in(kSecond, token)) return PersonClass::Second;
    if (in(kThird, token)) return PersonClass::Third;
    return PersonClass::Unknown;
}

bool is_negation(const std::string& token) {
    if (token == "not" || token == "never") return true;
    return token.size() > 3 && token.ends_with("n't");
}

bool is_mention(const std::string& token) {
    return token.size() > 1 && token[0] == '@';
}

// Lowercase ASCII and rewrite U+2019 (curly apostrophe) to '\''.
std::string fold(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == 0xE2 && i + 2 < text.size() &&
            static_cast<unsigned char>(text[i + 1]) == 0x80 &&
            static_cast<unsigned char>(text[i + 2]) == 0x99) {
            out.push_back('\'');
            i += 2;
        } else {
            out.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    return out;
}

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_char(unsigned char c) {
    if (c >= 0x80) return true;  // any non-ASCII byte stays inside a word
    if (std::isalnum(c)) return true;
    return c == '\'' || c == '@' || c == '#' || c == '/' || c == '_';
}

}  // namespace

std::string normalize_text(const std::string& text) {
    const std::string folded = fold(text);
    std::string out;
    out.reserve(folded.size());
    bool pending_space = false;
    for (const char ch : folded) {
        if (is_space(static_cast<unsigned char>(ch))) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(ch);
        }
    }
    return out;
}

bool contains_phrase(const std::string& text, const std::string& phrase) {
    return normalize_text(text).find(normalize_text(phrase)) != std::string::npos;
}

bool is_cue_candidate(const std::string& text) {
    return contains_phrase(text, kCueQueryPhrase);
}

std::vector<std::string> tokenize(const std::string& text) {
    const std::string folded = fold(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < folded.size()) {
        const unsigned char c = static_cast<unsigned char>(folded[i]);
        if (is_space(c)) {
            ++i;
            continue;
        }
        const bool word = is_word_char(c);
        std::size_t start = i;
        while (i < folded.size()) {
            const unsigned char cc = static_cast<unsigned char>(folded[i]);
            if (is_space(cc) || is_word_char(cc) != word) break;
            ++i;
        }
        tokens.push_back(folded.substr(start, i - start));
    }
    return tokens;
}

CueDecision classify_cue(const std::string& text) {
    const std::vector<std::string> tokens = tokenize(text);

    std::size_t phrase = tokens.size();
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == "being" && tokens[i + 1] == "sarcastic") {
            phrase = i;
            break;
        }
    }
    if (phrase == tokens.size()) {
        return {PersonClass::Unknown, std::nullopt, CueReason::NoQueryPhrase};
    }

    const std::size_t window_begin = phrase >= kSubjectWindow ? phrase - kSubjectWindow : 0;
    const std::size_t negation_begin = phrase >= kNegationWindow ? phrase - kNegationWindow : 0;

    for (std::size_t i = negation_begin; i < phrase; ++i) {
        if (is_negation(tokens[i])) {
            return {PersonClass::Unknown, std::nullopt, CueReason::NegationPresent};
        }
    }

    // Nearest subject-slot occupant decides; scan right to left.
    for (std::size_t k = phrase; k > window_begin; --k) {
        const std::string& token = tokens[k - 1];
        if (is_mention(token)) {
            return {PersonClass::Unknown, std::nullopt, CueReason::MentionSubject};
        }
        if (in(kPlural, token)) {
            return {PersonClass::Unknown, std::nullopt, CueReason::PluralPronoun};
        }
        const PersonClass person = singular_class(token);
        if (person == PersonClass::Unknown) continue;

        // A second pronoun of a different class anywhere in the window makes
        // the subject ambiguous; repeats of the same class are fine.
        for (std::size_t j = window_begin; j < phrase; ++j) {
            const PersonClass other = singular_class(tokens[j]);
            if (other != PersonClass::Unknown && other != person) {
                return {PersonClass::Unknown, std::nullopt, CueReason::MultiplePronouns};
            }
        }
        return {person, token, CueReason::Classified};
    }

    return {PersonClass::Unknown, std::nullopt, CueReason::NoPronoun};
}

}  // namespace cueharvest
