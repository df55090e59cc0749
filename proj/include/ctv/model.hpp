#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctv {

enum class Actor : std::uint8_t { Attacker, Victim };

enum class AddressTag : std::uint8_t { A_known, A_alias, D_known, U_secret, WholeCache, Star };

enum class StepKind : std::uint8_t { Access, Invalidate, Star };

// The 17 cache-block states, in the row order of the state table. This order
// drives enumeration, canonical forms and catalog numbering.
enum class State : std::uint8_t {
    Vu,
    Vu_inv,
    Aa,
    Va,
    Aalias,
    Valias,
    Ad,
    Vd,
    A_inv,
    V_inv,
    Aa_inv,
    Va_inv,
    Aalias_inv,
    Valias_inv,
    Ad_inv,
    Vd_inv,
    Star,
};

inline constexpr int kStateCount = 17;
inline constexpr int kPatternCount = kStateCount * kStateCount * kStateCount;

const std::array<State, kStateCount>& all_states();

std::optional<Actor> actor_of(State s);
AddressTag tag_of(State s);
StepKind kind_of(State s);
bool is_secret(State s);
bool is_whole_cache(State s);
int index_of(State s);

// Token used in pattern text, e.g. "A_a^inv", "V_u", "star".
std::string_view token_of(State s);
std::optional<State> state_from_token(std::string_view token);
// Builds a state from its components; throws ParseError for combinations
// absent from the state table (e.g. an attacker access of u).
State make_state(Actor actor, AddressTag tag, StepKind kind);

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Pattern {
    std::array<State, 3> steps{};

    State operator[](std::size_t i) const { return steps[i]; }
    bool has_secret() const;
    // Lexicographic over state order; matches enumeration order.
    auto operator<=>(const Pattern&) const = default;
};

// Dense index in [0, 4913); inverse of pattern_at.
int pattern_index(const Pattern& p);
Pattern pattern_at(int index);

std::vector<Pattern> enumerate_patterns();

std::string format_pattern(const Pattern& p);
// Parses "S1 ~> S2 ~> S3". Throws ParseError naming the offending token.
Pattern parse_pattern(std::string_view text);

enum class Candidate : std::uint8_t { EqualsA, EqualsAlias, NotInBlock };
inline constexpr std::array<Candidate, 3> kCandidates{Candidate::EqualsA, Candidate::EqualsAlias,
                                                     Candidate::NotInBlock};
std::string_view candidate_name(Candidate c);  // "A", "ALIAS", "NIB"
std::optional<Candidate> candidate_from_name(std::string_view name);

// Address a concrete step touches. NibA lives in a second cache set that never
// conflicts with the tracked one.
enum class Target : std::uint8_t { A, Alias, D, NibA, WholeCache, Unknown };

struct ConcreteStep {
    State origin{};
    std::optional<Actor> actor;
    Target target{};
    StepKind kind{};

    auto operator<=>(const ConcreteStep&) const = default;
};

struct ConcretePattern {
    std::array<ConcreteStep, 3> steps{};
    bool no_secret = false;

    auto operator<=>(const ConcretePattern&) const = default;
};

ConcretePattern substitute_candidate(const Pattern& p, Candidate c);
// Already-concrete input is returned unchanged.
ConcretePattern substitute_candidate(const ConcretePattern& p, Candidate c);

}  // namespace ctv
