#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ctv/cache_sim.hpp"
#include "ctv/model.hpp"

namespace ctv {

struct OperationVariant {
    std::array<StepOp, 3> ops{};

    std::string token() const;  // e.g. "R-W-RW"
    auto operator<=>(const OperationVariant&) const = default;
};

// Access -> {R, W}; targeted invalidation -> {F, RW}; whole-cache
// invalidation -> {F}; unknown state -> {X}.
std::vector<OperationVariant> operation_variants(const Pattern& p);

// Symmetric 66x66 relation "statistically separable on this machine".
class DistinguishabilityMatrix {
public:
    static DistinguishabilityMatrix ideal();
    static DistinguishabilityMatrix nothing();

    bool distinguishable(TimingClass x, TimingClass y) const;
    void set(TimingClass x, TimingClass y, bool value);

    // Group id per class id 0..66: connected components of "not
    // distinguishable". Unobserved (0) is always its own group.
    std::array<int, kTimingClassCount + 1> groups() const;

    // Refinement order: every pair separable in `coarser` is separable here.
    bool finer_or_equal(const DistinguishabilityMatrix& coarser) const;

    // 66 lines of 66 '0'/'1' characters.
    std::string to_text() const;
    static DistinguishabilityMatrix from_text(const std::string& text);

    bool operator==(const DistinguishabilityMatrix&) const = default;

private:
    std::array<std::bitset<kTimingClassCount>, kTimingClassCount> sep_{};
};

enum class Effectiveness { Strong, Weak, Ineffective };
std::string_view effectiveness_name(Effectiveness e);

struct Witness {
    OperationVariant variant;
    Candidate candidate{};
    std::vector<int> classes;  // timing classes that identify the candidate
};

struct Classification {
    Effectiveness value = Effectiveness::Ineffective;
    std::vector<Witness> witnesses;  // non-empty iff Strong
};

// Per-candidate timing-class sets for one operation variant.
using CandidateClasses = std::array<ClassSet, 3>;
CandidateClasses candidate_classes(const Pattern& p, const OperationVariant& v, Simulator& sim);

// Candidates whose class-group set is disjoint from the other two.
std::vector<Candidate> unique_candidates(const CandidateClasses& sets, const DistinguishabilityMatrix& dm);

Classification classify(const Pattern& p, const DistinguishabilityMatrix& dm, Simulator& sim);
Classification classify(const Pattern& p, const DistinguishabilityMatrix& dm = DistinguishabilityMatrix::ideal());

enum class Interference { Internal, External };
enum class Basis { Address, Set, SetAddress };

struct Category {
    Interference interference{};
    Basis basis{};

    std::string label() const;  // "I-A", "E-SA", ...
    static Category parse(std::string_view label);
    auto operator<=>(const Category&) const = default;
};

// Internal iff steps 2 and 3 are both victim steps. Basis from the identified
// candidates: only a -> Address, only NIB -> Set, otherwise SetAddress.
Category categorize(const Pattern& p, const std::vector<Witness>& witnesses);

struct VulnerabilityRecord {
    int number = 0;
    Pattern pattern;
    Category category;
    std::string strategy;
    bool new_here = false;  // absent from the earlier single-core catalog
};

// Embedded golden Strong catalog, 88 rows in catalog order.
const std::vector<VulnerabilityRecord>& golden_catalog();

// a <-> a^alias swap on every step.
Pattern relabel(const Pattern& p);
// Smaller of p and relabel(p) under state order.
Pattern canonical(const Pattern& p);

enum class Reduction {
    Kept,
    RelabelDuplicate,   // non-canonical member of an a <-> a^alias pair
    LateUnknown,        // unknown state in step 2 or 3
    AdjacentKnown,      // two adjacent steps without u: one is redundant
    AdjacentSecret,     // two adjacent u steps: one is redundant
    MismatchedProbe,    // known-u-known whose outer steps name different lines
};
std::string_view reduction_name(Reduction r);

// Rule that removes or demotes a classified pattern. MismatchedProbe only
// demotes Strong to Weak; the other rules drop the pattern.
Reduction reduction_for(const Pattern& p);

struct DerivationResult {
    std::vector<Effectiveness> raw;          // indexed by pattern_index
    std::vector<VulnerabilityRecord> strong; // catalog order; number 0 = not in golden
    std::vector<Pattern> weak;               // state order
    std::vector<Pattern> demoted;            // Strong patterns reduced to Weak
    std::vector<std::string> diff;           // empty iff strong == golden
    std::map<Reduction, int> removed;        // reduction counts over raw Strong and Weak

    int raw_count(Effectiveness e) const;
};

DerivationResult derive_catalog(const DistinguishabilityMatrix& dm = DistinguishabilityMatrix::ideal());

// Golden records still Strong under dm.
std::vector<VulnerabilityRecord> predict_effective(const DistinguishabilityMatrix& dm);

std::map<std::string, int> category_histogram(const std::vector<VulnerabilityRecord>& records);

std::string catalog_text(const std::vector<VulnerabilityRecord>& records);
std::string catalog_json(const DerivationResult& result);

namespace detail {
struct GoldenRow {
    int number;
    const char* pattern;
    const char* category;
    const char* strategy;
    bool new_here;
};
const std::vector<GoldenRow>& golden_rows();
}  // namespace detail

}  // namespace ctv
