#include <doctest.h>

#include <set>

#include "ctv/model.hpp"

using namespace ctv;

TEST_CASE("seventeen states round-trip through their tokens") {
    CHECK(all_states().size() == 17);
    std::set<std::string_view> tokens;
    for (auto s : all_states()) {
        tokens.insert(token_of(s));
        CHECK(state_from_token(token_of(s)) == s);
        if (is_secret(s)) CHECK(actor_of(s) == Actor::Victim);
    }
    CHECK(tokens.size() == 17);
    CHECK_FALSE(actor_of(State::Star).has_value());
}

TEST_CASE("make_state rejects combinations outside the state table") {
    CHECK(make_state(Actor::Victim, AddressTag::U_secret, StepKind::Access) == State::Vu);
    CHECK(make_state(Actor::Attacker, AddressTag::WholeCache, StepKind::Invalidate) == State::A_inv);
    CHECK_THROWS_AS(make_state(Actor::Attacker, AddressTag::U_secret, StepKind::Access), ParseError);
    CHECK_THROWS_AS(make_state(Actor::Victim, AddressTag::WholeCache, StepKind::Access), ParseError);
}

TEST_CASE("enumeration covers the cross product once in state order") {
    auto all = enumerate_patterns();
    REQUIRE(all.size() == 4913);
    CHECK(all.front() == Pattern{{State::Vu, State::Vu, State::Vu}});
    CHECK(std::set<Pattern>(all.begin(), all.end()).size() == all.size());
    CHECK(std::is_sorted(all.begin(), all.end()));
    for (int i = 0; i < kPatternCount; ++i) CHECK(pattern_index(all[static_cast<std::size_t>(i)]) == i);

    std::array<int, kStateCount> first{};
    for (const auto& p : all) ++first[static_cast<std::size_t>(index_of(p[0]))];
    for (int n : first) CHECK(n == 289);
}

TEST_CASE("pattern text parses and formats") {
    auto p = parse_pattern("A^inv ~> V_u ~> A_a");
    CHECK(p == Pattern{{State::A_inv, State::Vu, State::Aa}});
    CHECK(parse_pattern("star ~> star ~> star") == Pattern{{State::Star, State::Star, State::Star}});
    for (const auto& q : enumerate_patterns()) CHECK(parse_pattern(format_pattern(q)) == q);
}

TEST_CASE("parse errors name the offending token") {
    auto message = [](std::string_view text) {
        try {
            parse_pattern(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("A_u ~> V_a ~> V_a").find("A_u") != std::string::npos);
    CHECK(message("A_a ~> V_q ~> V_a").find("V_q") != std::string::npos);
    CHECK_FALSE(message("A_a ~> V_a").empty());
    CHECK_FALSE(message("A_a ~> V_a ~> V_a ~> V_a").empty());
}

TEST_CASE("candidate substitution") {
    auto a = substitute_candidate(parse_pattern("A_a ~> V_u ~> A_a"), Candidate::EqualsA);
    CHECK(a.steps[1].target == Target::A);
    CHECK(a.steps[1].actor == Actor::Victim);
    CHECK_FALSE(a.no_secret);

    auto nib = substitute_candidate(parse_pattern("V_u ~> A_d ~> V_u"), Candidate::NotInBlock);
    CHECK(nib.steps[0].target == Target::NibA);
    CHECK(nib.steps[1].target == Target::D);
    CHECK(nib.steps[2].target == Target::NibA);

    auto alias = substitute_candidate(parse_pattern("V_u^inv ~> A_d ~> V_u"), Candidate::EqualsAlias);
    CHECK(alias.steps[0].target == Target::Alias);
    CHECK(alias.steps[0].kind == StepKind::Invalidate);

    auto plain = parse_pattern("A_d ~> V_d ~> A_d");
    for (auto c : kCandidates) {
        auto s = substitute_candidate(plain, c);
        CHECK(s.no_secret);
        CHECK(s == substitute_candidate(plain, Candidate::EqualsA));
    }
}

TEST_CASE("substitution is idempotent and yields three variants per secret pattern") {
    for (const auto& p : enumerate_patterns()) {
        std::set<ConcretePattern> distinct;
        for (auto c : kCandidates) {
            auto once = substitute_candidate(p, c);
            CHECK(substitute_candidate(once, Candidate::NotInBlock) == once);
            distinct.insert(once);
        }
        CHECK(distinct.size() == (p.has_secret() ? 3U : 1U));
    }
}
