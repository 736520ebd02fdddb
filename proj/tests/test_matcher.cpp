#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "cueharvest/matcher.hpp"
#include "cueharvest/synth.hpp"

using namespace cueharvest;

namespace {

RoleAssignment expect_match(const std::string& letters, PersonClass person) {
    const auto roles = match_roles(letters, person);
    REQUIRE_MESSAGE(roles.has_value(), letters);
    return *roles;
}

constexpr std::array<PersonClass, 3> kClasses = {PersonClass::First, PersonClass::Second,
                                                 PersonClass::Third};

}  // namespace

TEST_CASE("pattern_for exposes the fixed per-class patterns") {
    CHECK(pattern_for(PersonClass::First).pattern_source == "^(A)([^A]*)(A)([^A]*)$");
    CHECK(pattern_for(PersonClass::Second).pattern_source == "^(A)A*(B)(A*)$");
    CHECK(pattern_for(PersonClass::Third).pattern_source == "^(A)(A*B[AB]*)(C)([AB]*)$");
    CHECK(pattern_for(PersonClass::Second).group_roles ==
          std::vector<std::string>{"cue", "sarcastic", "eliciting-zone"});
    CHECK_THROWS_AS(pattern_for(PersonClass::Unknown), std::invalid_argument);
}

TEST_CASE("golden first-person assignments") {
    RoleAssignment roles = expect_match("ABAC", PersonClass::First);
    CHECK(roles.sarcastic_index == 2);
    CHECK(roles.oblivious_index == 1);
    CHECK(roles.eliciting_index == 3);
    CHECK(roles.perspective == Perspective::Intended);
    CHECK(roles.cue_index == 0);

    roles = expect_match("ABA", PersonClass::First);
    CHECK(roles.sarcastic_index == 2);
    CHECK(roles.oblivious_index == 1);
    CHECK_FALSE(roles.eliciting_index.has_value());

    // an oblivious zone of two tweets designates nobody
    roles = expect_match("ABCA", PersonClass::First);
    CHECK(roles.sarcastic_index == 3);
    CHECK_FALSE(roles.oblivious_index.has_value());
    CHECK_FALSE(roles.eliciting_index.has_value());

    CHECK_FALSE(match_roles("ABAA", PersonClass::First).has_value());
}

TEST_CASE("golden second-person assignments") {
    RoleAssignment roles = expect_match("AB", PersonClass::Second);
    CHECK(roles.sarcastic_index == 1);
    CHECK_FALSE(roles.oblivious_index.has_value());
    CHECK_FALSE(roles.eliciting_index.has_value());
    CHECK(roles.perspective == Perspective::Perceived);

    roles = expect_match("ABA", PersonClass::Second);
    CHECK(roles.sarcastic_index == 1);
    CHECK_FALSE(roles.oblivious_index.has_value());
    CHECK(roles.eliciting_index == 2);
}

TEST_CASE("golden third-person assignments") {
    RoleAssignment roles = expect_match("ABC", PersonClass::Third);
    CHECK(roles.sarcastic_index == 2);
    CHECK(roles.oblivious_index == 1);
    CHECK_FALSE(roles.eliciting_index.has_value());

    roles = expect_match("ABCB", PersonClass::Third);
    CHECK(roles.sarcastic_index == 2);
    CHECK(roles.oblivious_index == 1);
    CHECK(roles.eliciting_index == 3);

    roles = expect_match("ABAC", PersonClass::Third);
    CHECK(roles.sarcastic_index == 3);
    CHECK(roles.oblivious_index == 1);  // the unique B
    CHECK_FALSE(roles.eliciting_index.has_value());

    // two Bs in the zone designate nobody
    roles = expect_match("ABABC", PersonClass::Third);
    CHECK(roles.sarcastic_index == 4);
    CHECK_FALSE(roles.oblivious_index.has_value());
    CHECK_FALSE(roles.eliciting_index.has_value());
}

TEST_CASE("match_roles accepts an AuthorSequence") {
    const AuthorSequence seq{"ABC", {"u1", "u2", "u3"}};
    const auto roles = match_roles(seq, PersonClass::Third);
    REQUIRE(roles.has_value());
    CHECK(roles->sarcastic_index == 2);
}

TEST_CASE("match_roles rejects the unknown class") {
    CHECK_THROWS_AS(match_roles("AB", PersonClass::Unknown), std::invalid_argument);
}

TEST_CASE("non-canonical or foreign-letter sequences behave like the characterization") {
    CHECK_FALSE(match_roles("BAA", PersonClass::First).has_value());  // must start with A
    CHECK(match_roles("ABDA", PersonClass::First).has_value());      // zones accept any non-A
    CHECK_FALSE(match_roles("ABD", PersonClass::Second).has_value());
    CHECK_FALSE(match_roles("ABDC", PersonClass::Third).has_value());
    CHECK_FALSE(match_roles("A", PersonClass::First).has_value());
    CHECK_FALSE(match_roles("", PersonClass::First).has_value());
}

TEST_CASE("matcher agrees with the constraint oracle on short sequences") {
    // lengths 1..5 over {A,B,C,D}; the acceptance suite extends this to 7
    const std::string alphabet = "ABCD";
    std::vector<std::string> sequences{""};
    for (int len = 1; len <= 5; ++len) {
        std::vector<std::string> next;
        for (const std::string& prefix : sequences) {
            for (const char c : alphabet) next.push_back(prefix + c);
        }
        sequences = std::move(next);
        for (const std::string& s : sequences) {
            for (const PersonClass person : kClasses) {
                CAPTURE(s);
                CAPTURE(person_number(person));
                const auto expected = oracle_roles(s, person);
                const auto actual = match_roles(s, person);
                REQUIRE(expected.has_value() == actual.has_value());
                if (expected) REQUIRE(*expected == *actual);
            }
        }
    }
}

TEST_CASE("every match names exactly one sarcastic tweet after the cue") {
    const std::string alphabet = "ABCD";
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                const std::string s = std::string{"A"} + alphabet[a] + alphabet[b] + alphabet[c];
                for (const PersonClass person : kClasses) {
                    const auto roles = match_roles(s, person);
                    if (!roles) continue;
                    CHECK(roles->sarcastic_index >= 1);
                    CHECK(roles->sarcastic_index < s.size());
                    if (roles->eliciting_index) {
                        CHECK(*roles->eliciting_index == roles->sarcastic_index + 1);
                    }
                    if (roles->oblivious_index) {
                        CHECK(*roles->oblivious_index >= 1);
                        CHECK(*roles->oblivious_index < roles->sarcastic_index);
                    }
                }
            }
        }
    }
}
