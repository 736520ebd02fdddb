#include "cueharvest/matcher.hpp"

#include <regex>

namespace cueharvest {

namespace {

const RolePattern kFirstPattern{
    PersonClass::First,
    "^(A)([^A]*)(A)([^A]*)$",
    {"cue", "oblivious-zone", "sarcastic", "eliciting-zone"},
};

const RolePattern kSecondPattern{
    PersonClass::Second,
    "^(A)A*(B)(A*)$",
    {"cue", "sarcastic", "eliciting-zone"},
};

const RolePattern kThirdPattern{
    PersonClass::Third,
    "^(A)(A*B[AB]*)(C)([AB]*)$",
    {"cue", "oblivious-zone", "sarcastic", "eliciting-zone"},
};

const std::regex& compiled(PersonClass person) {
    static const std::regex first(kFirstPattern.pattern_source, std::regex::optimize);
    static const std::regex second(kSecondPattern.pattern_source, std::regex::optimize);
    static const std::regex third(kThirdPattern.pattern_source, std::regex::optimize);
    switch (person) {
    case PersonClass::First: return first;
    case PersonClass::Second: return second;
    default: return third;
    }
}

}  // namespace

const RolePattern& pattern_for(PersonClass person) {
    switch (person) {
    case PersonClass::First: return kFirstPattern;
    case PersonClass::Second: return kSecondPattern;
    case PersonClass::Third: return kThirdPattern;
    default:
        throw std::invalid_argument("pattern_for: no pattern for unknown person class");
    }
}

std::optional<RoleAssignment> match_roles(const std::string& letters, PersonClass person) {
    if (person == PersonClass::Unknown) {
        throw std::invalid_argument("match_roles: unknown person class");
    }
    std::smatch m;
    if (!std::regex_match(letters, m, compiled(person))) {
        return std::nullopt;
    }

    RoleAssignment roles;
    roles.person = person;
    roles.perspective = perspective_of(person);
    roles.cue_index = 0;

    switch (person) {
    case PersonClass::First: {
        roles.sarcastic_index = static_cast<std::size_t>(m.position(3));
        if (m.length(2) == 1) {
            roles.oblivious_index = static_cast<std::size_t>(m.position(2));
        }
        if (m.length(4) > 0) {
            roles.eliciting_index = roles.sarcastic_index + 1;
        }
        break;
    }
    case PersonClass::Second: {
        roles.sarcastic_index = static_cast<std::size_t>(m.position(2));
        if (m.length(3) > 0) {
            roles.eliciting_index = roles.sarcastic_index + 1;
        }
        break;
    }
    default: {  // Third
        roles.sarcastic_index = static_cast<std::size_t>(m.position(3));
        const std::string zone = m.str(2);
        const auto first_b = zone.find('B');
        if (first_b != std::string::npos && zone.find('B', first_b + 1) == std::string::npos) {
            roles.oblivious_index = static_cast<std::size_t>(m.position(2)) + first_b;
        }
        if (m.length(4) > 0) {
            roles.eliciting_index = roles.sarcastic_index + 1;
        }
        break;
    }
    }
    return roles;
}

std::optional<RoleAssignment> match_roles(const AuthorSequence& sequence, PersonClass person) {
    return match_roles(sequence.letters, person);
}

}  // namespace cueharvest
