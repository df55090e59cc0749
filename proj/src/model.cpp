#include "ctv/model.hpp"

#include <algorithm>

namespace ctv {
namespace {

struct StateInfo {
    State state;
    std::string_view token;
    std::optional<Actor> actor;
    AddressTag tag;
    StepKind kind;
};

constexpr auto A = Actor::Attacker;
constexpr auto V = Actor::Victim;

const std::array<StateInfo, kStateCount> kInfo{{
    {State::Vu, "V_u", V, AddressTag::U_secret, StepKind::Access},
    {State::Vu_inv, "V_u^inv", V, AddressTag::U_secret, StepKind::Invalidate},
    {State::Aa, "A_a", A, AddressTag::A_known, StepKind::Access},
    {State::Va, "V_a", V, AddressTag::A_known, StepKind::Access},
    {State::Aalias, "A_a^alias", A, AddressTag::A_alias, StepKind::Access},
    {State::Valias, "V_a^alias", V, AddressTag::A_alias, StepKind::Access},
    {State::Ad, "A_d", A, AddressTag::D_known, StepKind::Access},
    {State::Vd, "V_d", V, AddressTag::D_known, StepKind::Access},
    {State::A_inv, "A^inv", A, AddressTag::WholeCache, StepKind::Invalidate},
    {State::V_inv, "V^inv", V, AddressTag::WholeCache, StepKind::Invalidate},
    {State::Aa_inv, "A_a^inv", A, AddressTag::A_known, StepKind::Invalidate},
    {State::Va_inv, "V_a^inv", V, AddressTag::A_known, StepKind::Invalidate},
    {State::Aalias_inv, "A_a^alias^inv", A, AddressTag::A_alias, StepKind::Invalidate},
    {State::Valias_inv, "V_a^alias^inv", V, AddressTag::A_alias, StepKind::Invalidate},
    {State::Ad_inv, "A_d^inv", A, AddressTag::D_known, StepKind::Invalidate},
    {State::Vd_inv, "V_d^inv", V, AddressTag::D_known, StepKind::Invalidate},
    {State::Star, "star", std::nullopt, AddressTag::Star, StepKind::Star},
}};

const StateInfo& info(State s) { return kInfo[static_cast<std::size_t>(s)]; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Target target_for(AddressTag tag) {
    switch (tag) {
        case AddressTag::A_known: return Target::A;
        case AddressTag::A_alias: return Target::Alias;
        case AddressTag::D_known: return Target::D;
        case AddressTag::WholeCache: return Target::WholeCache;
        case AddressTag::Star: return Target::Unknown;
        case AddressTag::U_secret: break;
    }
    throw std::logic_error("secret tag has no fixed target");
}

Target target_for(Candidate c) {
    switch (c) {
        case Candidate::EqualsA: return Target::A;
        case Candidate::EqualsAlias: return Target::Alias;
        case Candidate::NotInBlock: return Target::NibA;
    }
    return Target::A;
}

}  // namespace

const std::array<State, kStateCount>& all_states() {
    static const auto states = [] {
        std::array<State, kStateCount> out{};
        for (int i = 0; i < kStateCount; ++i) out[i] = static_cast<State>(i);
        return out;
    }();
    return states;
}

std::optional<Actor> actor_of(State s) { return info(s).actor; }
AddressTag tag_of(State s) { return info(s).tag; }
StepKind kind_of(State s) { return info(s).kind; }
bool is_secret(State s) { return info(s).tag == AddressTag::U_secret; }
bool is_whole_cache(State s) { return info(s).tag == AddressTag::WholeCache; }
int index_of(State s) { return static_cast<int>(s); }
std::string_view token_of(State s) { return info(s).token; }

std::optional<State> state_from_token(std::string_view token) {
    for (const auto& i : kInfo)
        if (i.token == token) return i.state;
    return std::nullopt;
}

State make_state(Actor actor, AddressTag tag, StepKind kind) {
    for (const auto& i : kInfo)
        if (i.actor == actor && i.tag == tag && i.kind == kind) return i.state;
    throw ParseError("no such state in the state table");
}

bool Pattern::has_secret() const {
    return std::any_of(steps.begin(), steps.end(), is_secret);
}

int pattern_index(const Pattern& p) {
    return (index_of(p[0]) * kStateCount + index_of(p[1])) * kStateCount + index_of(p[2]);
}

Pattern pattern_at(int index) {
    if (index < 0 || index >= kPatternCount) throw std::out_of_range("pattern index");
    return Pattern{{static_cast<State>(index / (kStateCount * kStateCount)),
                    static_cast<State>(index / kStateCount % kStateCount),
                    static_cast<State>(index % kStateCount)}};
}

std::vector<Pattern> enumerate_patterns() {
    std::vector<Pattern> out;
    out.reserve(kPatternCount);
    for (int i = 0; i < kPatternCount; ++i) out.push_back(pattern_at(i));
    return out;
}

std::string format_pattern(const Pattern& p) {
    std::string out;
    for (std::size_t i = 0; i < 3; ++i) {
        if (i) out += " ~> ";
        out += token_of(p[i]);
    }
    return out;
}

Pattern parse_pattern(std::string_view text) {
    std::vector<std::string_view> parts;
    for (;;) {
        auto pos = text.find("~>");
        parts.push_back(trim(text.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 2);
    }
    if (parts.size() != 3)
        throw ParseError("expected 3 steps separated by '~>', got " + std::to_string(parts.size()));
    Pattern p;
    for (std::size_t i = 0; i < 3; ++i) {
        auto s = state_from_token(parts[i]);
        if (!s) {
            std::string tok(parts[i]);
            if (tok.rfind("A_u", 0) == 0)
                throw ParseError("unknown token '" + tok + "': u is only accessed by the victim");
            throw ParseError("unknown token '" + tok + "'");
        }
        p.steps[i] = *s;
    }
    return p;
}

std::string_view candidate_name(Candidate c) {
    switch (c) {
        case Candidate::EqualsA: return "A";
        case Candidate::EqualsAlias: return "ALIAS";
        case Candidate::NotInBlock: return "NIB";
    }
    return "?";
}

std::optional<Candidate> candidate_from_name(std::string_view name) {
    for (auto c : kCandidates)
        if (candidate_name(c) == name) return c;
    return std::nullopt;
}

ConcretePattern substitute_candidate(const Pattern& p, Candidate c) {
    ConcretePattern out;
    out.no_secret = !p.has_secret();
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& in = info(p[i]);
        out.steps[i] = ConcreteStep{in.state, in.actor,
                                    in.tag == AddressTag::U_secret ? target_for(c) : target_for(in.tag),
                                    in.kind};
    }
    return out;
}

ConcretePattern substitute_candidate(const ConcretePattern& p, Candidate) { return p; }

}  // namespace ctv
