#include "ctv/derivation.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

namespace ctv {
namespace {

using ClassGroups = std::array<int, kTimingClassCount + 1>;

ClassSet to_groups(const ClassSet& classes, const ClassGroups& groups) {
    ClassSet out;
    for (int c = 0; c <= kTimingClassCount; ++c)
        if (classes.test(c)) out.set(groups[c]);
    return out;
}

std::vector<StepOp> choices(State s) {
    switch (kind_of(s)) {
        case StepKind::Access: return {StepOp::Read, StepOp::Write};
        case StepKind::Invalidate:
            if (is_whole_cache(s)) return {StepOp::Flush};
            return {StepOp::Flush, StepOp::RemoteWrite};
        case StepKind::Star: return {StepOp::Unknown};
    }
    return {};
}

// 'u', 'k' (known line or whole cache) or '*'.
char role(State s) {
    if (s == State::Star) return '*';
    return is_secret(s) ? 'u' : 'k';
}

bool same_line(State outer1, State outer3) {
    if (is_whole_cache(outer1)) return true;
    return tag_of(outer1) == tag_of(outer3);
}

State swap_alias(State s) {
    switch (s) {
        case State::Aa: return State::Aalias;
        case State::Va: return State::Valias;
        case State::Aalias: return State::Aa;
        case State::Valias: return State::Va;
        case State::Aa_inv: return State::Aalias_inv;
        case State::Va_inv: return State::Valias_inv;
        case State::Aalias_inv: return State::Aa_inv;
        case State::Valias_inv: return State::Va_inv;
        default: return s;
    }
}

}  // namespace

std::string OperationVariant::token() const {
    return fmt::format("{}-{}-{}", step_op_token(ops[0]), step_op_token(ops[1]), step_op_token(ops[2]));
}

std::vector<OperationVariant> operation_variants(const Pattern& p) {
    std::vector<OperationVariant> out;
    for (auto o1 : choices(p[0]))
        for (auto o2 : choices(p[1]))
            for (auto o3 : choices(p[2])) out.push_back(OperationVariant{{o1, o2, o3}});
    return out;
}

DistinguishabilityMatrix DistinguishabilityMatrix::ideal() {
    DistinguishabilityMatrix m;
    for (int i = 0; i < kTimingClassCount; ++i)
        for (int j = 0; j < kTimingClassCount; ++j)
            if (i != j) m.sep_[i].set(j);
    return m;
}

DistinguishabilityMatrix DistinguishabilityMatrix::nothing() { return DistinguishabilityMatrix{}; }

bool DistinguishabilityMatrix::distinguishable(TimingClass x, TimingClass y) const {
    if (!x.observed() || !y.observed()) return false;
    return sep_[x.id() - 1].test(y.id() - 1);
}

void DistinguishabilityMatrix::set(TimingClass x, TimingClass y, bool value) {
    if (!x.observed() || !y.observed() || x.id() > kTimingClassCount || y.id() > kTimingClassCount)
        throw std::out_of_range("timing class id");
    if (x == y) return;
    sep_[x.id() - 1].set(y.id() - 1, value);
    sep_[y.id() - 1].set(x.id() - 1, value);
}

std::array<int, kTimingClassCount + 1> DistinguishabilityMatrix::groups() const {
    std::array<int, kTimingClassCount + 1> group{};
    group.fill(-1);
    group[0] = 0;
    int next = 1;
    for (int start = 1; start <= kTimingClassCount; ++start) {
        if (group[start] >= 0) continue;
        std::vector<int> stack{start};
        group[start] = next;
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            for (int d = 1; d <= kTimingClassCount; ++d)
                if (group[d] < 0 && !sep_[c - 1].test(d - 1)) {
                    group[d] = next;
                    stack.push_back(d);
                }
        }
        ++next;
    }
    return group;
}

bool DistinguishabilityMatrix::finer_or_equal(const DistinguishabilityMatrix& coarser) const {
    for (int i = 0; i < kTimingClassCount; ++i)
        if ((coarser.sep_[i] & ~sep_[i]).any()) return false;
    return true;
}

std::string DistinguishabilityMatrix::to_text() const {
    std::string out;
    for (int i = 0; i < kTimingClassCount; ++i) {
        for (int j = 0; j < kTimingClassCount; ++j) out += sep_[i].test(j) ? '1' : '0';
        out += '\n';
    }
    return out;
}

DistinguishabilityMatrix DistinguishabilityMatrix::from_text(const std::string& text) {
    DistinguishabilityMatrix m;
    std::istringstream in(text);
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (row >= kTimingClassCount || line.size() != kTimingClassCount)
            throw std::runtime_error(fmt::format("matrix row {}: expected {} columns", row + 1, kTimingClassCount));
        for (int j = 0; j < kTimingClassCount; ++j) {
            if (line[j] != '0' && line[j] != '1') throw std::runtime_error("matrix entries must be 0 or 1");
            m.sep_[row].set(j, line[j] == '1');
        }
        ++row;
    }
    if (row != kTimingClassCount) throw std::runtime_error("matrix must have 66 rows");
    for (int i = 0; i < kTimingClassCount; ++i) {
        if (m.sep_[i].test(i)) throw std::runtime_error("matrix diagonal must be 0");
        for (int j = 0; j < kTimingClassCount; ++j)
            if (m.sep_[i].test(j) != m.sep_[j].test(i)) throw std::runtime_error("matrix must be symmetric");
    }
    return m;
}

std::string_view effectiveness_name(Effectiveness e) {
    switch (e) {
        case Effectiveness::Strong: return "Strong";
        case Effectiveness::Weak: return "Weak";
        case Effectiveness::Ineffective: return "Ineffective";
    }
    return "?";
}

CandidateClasses candidate_classes(const Pattern& p, const OperationVariant& v, Simulator& sim) {
    CandidateClasses out;
    for (std::size_t i = 0; i < 3; ++i) out[i] = sim.run_pattern(substitute_candidate(p, kCandidates[i]), v.ops);
    return out;
}

std::vector<Candidate> unique_candidates(const CandidateClasses& sets, const DistinguishabilityMatrix& dm) {
    auto groups = dm.groups();
    std::array<ClassSet, 3> g;
    for (std::size_t i = 0; i < 3; ++i) g[i] = to_groups(sets[i], groups);
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < 3; ++i) {
        auto others = g[(i + 1) % 3] | g[(i + 2) % 3];
        if ((g[i] & others).none()) out.push_back(kCandidates[i]);
    }
    return out;
}

Classification classify(const Pattern& p, const DistinguishabilityMatrix& dm, Simulator& sim) {
    Classification out;
    if (!p.has_secret()) return out;
    auto groups = dm.groups();
    bool differs = false;
    for (const auto& v : operation_variants(p)) {
        auto sets = candidate_classes(p, v, sim);
        std::array<ClassSet, 3> g;
        for (std::size_t i = 0; i < 3; ++i) g[i] = to_groups(sets[i], groups);
        if (g[0] != g[1] || g[1] != g[2]) differs = true;
        for (auto c : unique_candidates(sets, dm)) {
            Witness w{v, c, {}};
            const auto& mine = sets[static_cast<std::size_t>(c)];
            for (int id = 1; id <= kTimingClassCount; ++id)
                if (mine.test(id)) w.classes.push_back(id);
            out.witnesses.push_back(std::move(w));
        }
    }
    out.value = !out.witnesses.empty() ? Effectiveness::Strong
                : differs                ? Effectiveness::Weak
                                         : Effectiveness::Ineffective;
    return out;
}

Classification classify(const Pattern& p, const DistinguishabilityMatrix& dm) {
    Simulator sim;
    return classify(p, dm, sim);
}

std::string Category::label() const {
    std::string out = interference == Interference::Internal ? "I-" : "E-";
    switch (basis) {
        case Basis::Address: out += "A"; break;
        case Basis::Set: out += "S"; break;
        case Basis::SetAddress: out += "SA"; break;
    }
    return out;
}

Category Category::parse(std::string_view label) {
    if (label.size() < 3 || label[1] != '-' || (label[0] != 'I' && label[0] != 'E'))
        throw std::invalid_argument("bad category label: " + std::string(label));
    Category c;
    c.interference = label[0] == 'I' ? Interference::Internal : Interference::External;
    auto b = label.substr(2);
    if (b == "A") c.basis = Basis::Address;
    else if (b == "S") c.basis = Basis::Set;
    else if (b == "SA") c.basis = Basis::SetAddress;
    else throw std::invalid_argument("bad category label: " + std::string(label));
    return c;
}

Category categorize(const Pattern& p, const std::vector<Witness>& witnesses) {
    Category c;
    c.interference = actor_of(p[1]) == Actor::Victim && actor_of(p[2]) == Actor::Victim ? Interference::Internal
                                                                                        : Interference::External;
    bool by_address = false, by_set = false;
    for (const auto& w : witnesses) {
        // Identifying a separates it from a^alias; identifying NIB separates
        // the set from the line; identifying a^alias needs both.
        if (w.candidate != Candidate::NotInBlock) by_address = true;
        if (w.candidate != Candidate::EqualsA) by_set = true;
    }
    if (!by_address && !by_set) throw std::invalid_argument("categorize needs a Strong witness");
    c.basis = by_address && by_set ? Basis::SetAddress : by_address ? Basis::Address : Basis::Set;
    return c;
}

const std::vector<VulnerabilityRecord>& golden_catalog() {
    static const auto records = [] {
        std::vector<VulnerabilityRecord> out;
        for (const auto& row : detail::golden_rows())
            out.push_back(VulnerabilityRecord{row.number, parse_pattern(row.pattern), Category::parse(row.category),
                                              row.strategy, row.new_here});
        return out;
    }();
    return records;
}

Pattern relabel(const Pattern& p) {
    return Pattern{{swap_alias(p[0]), swap_alias(p[1]), swap_alias(p[2])}};
}

Pattern canonical(const Pattern& p) { return std::min(p, relabel(p)); }

std::string_view reduction_name(Reduction r) {
    switch (r) {
        case Reduction::Kept: return "kept";
        case Reduction::RelabelDuplicate: return "relabel-duplicate";
        case Reduction::LateUnknown: return "unknown-in-step-2-or-3";
        case Reduction::AdjacentKnown: return "adjacent-known-steps";
        case Reduction::AdjacentSecret: return "adjacent-u-steps";
        case Reduction::MismatchedProbe: return "mismatched-outer-lines";
    }
    return "?";
}

Reduction reduction_for(const Pattern& p) {
    if (canonical(p) != p) return Reduction::RelabelDuplicate;
    if (p[1] == State::Star || p[2] == State::Star) return Reduction::LateUnknown;
    for (std::size_t i = 0; i < 2; ++i) {
        char x = role(p[i]), y = role(p[i + 1]);
        if (x == '*' || y == '*') continue;
        if (x == 'k' && y == 'k') return Reduction::AdjacentKnown;
        if (x == 'u' && y == 'u') return Reduction::AdjacentSecret;
    }
    if (role(p[0]) == 'k' && role(p[1]) == 'u' && role(p[2]) == 'k' && !same_line(p[0], p[2]))
        return Reduction::MismatchedProbe;
    return Reduction::Kept;
}

int DerivationResult::raw_count(Effectiveness e) const {
    return static_cast<int>(std::count(raw.begin(), raw.end(), e));
}

DerivationResult derive_catalog(const DistinguishabilityMatrix& dm) {
    DerivationResult result;
    result.raw.resize(kPatternCount);
    Simulator sim;
    std::vector<std::pair<Pattern, Category>> strong;
    for (const auto& p : enumerate_patterns()) {
        auto cls = classify(p, dm, sim);
        result.raw[pattern_index(p)] = cls.value;
        if (cls.value == Effectiveness::Ineffective) continue;
        auto r = reduction_for(p);
        if (r == Reduction::Kept && cls.value == Effectiveness::Strong) {
            strong.emplace_back(p, categorize(p, cls.witnesses));
            continue;
        }
        if (r == Reduction::Kept || r == Reduction::MismatchedProbe) {
            result.weak.push_back(p);
            if (cls.value == Effectiveness::Strong) result.demoted.push_back(p);
        }
        if (r != Reduction::Kept) ++result.removed[r];
    }

    const auto& golden = golden_catalog();
    std::map<Pattern, const VulnerabilityRecord*> by_pattern;
    for (const auto& g : golden) by_pattern.emplace(g.pattern, &g);
    std::set<Pattern> derived;
    for (const auto& [p, cat] : strong) {
        derived.insert(p);
        auto it = by_pattern.find(p);
        if (it == by_pattern.end()) {
            result.strong.push_back(VulnerabilityRecord{0, p, cat, "", false});
            result.diff.push_back(fmt::format("extra: {} {}", format_pattern(p), cat.label()));
            continue;
        }
        const auto& g = *it->second;
        result.strong.push_back(VulnerabilityRecord{g.number, p, cat, g.strategy, g.new_here});
        if (cat != g.category)
            result.diff.push_back(fmt::format("category: #{} {} derived {} expected {}", g.number, format_pattern(p),
                                              cat.label(), g.category.label()));
    }
    for (const auto& g : golden)
        if (!derived.count(g.pattern))
            result.diff.push_back(fmt::format("missing: #{} {} {}", g.number, format_pattern(g.pattern),
                                              g.category.label()));
    std::stable_sort(result.strong.begin(), result.strong.end(), [](const auto& x, const auto& y) {
        auto kx = x.number ? x.number : 1000, ky = y.number ? y.number : 1000;
        return kx < ky;
    });
    return result;
}

std::vector<VulnerabilityRecord> predict_effective(const DistinguishabilityMatrix& dm) {
    Simulator sim;
    std::vector<VulnerabilityRecord> out;
    for (const auto& g : golden_catalog())
        if (classify(g.pattern, dm, sim).value == Effectiveness::Strong) out.push_back(g);
    return out;
}

std::map<std::string, int> category_histogram(const std::vector<VulnerabilityRecord>& records) {
    std::map<std::string, int> out;
    for (const auto& r : records) ++out[r.category.label()];
    return out;
}

std::string catalog_text(const std::vector<VulnerabilityRecord>& records) {
    std::string out = "# strong-catalog v1: number | step1 ~> step2 ~> step3 | interference | basis | strategy\n";
    for (const auto& r : records) {
        auto label = r.category.label();
        out += fmt::format("{:>2} | {} | {} | {} | {}{}\n", r.number, format_pattern(r.pattern), label.substr(0, 1),
                           label.substr(2), r.strategy, r.new_here ? " (new)" : "");
    }
    return out;
}

std::string catalog_json(const DerivationResult& result) {
    nlohmann::json j;
    j["version"] = 1;
    j["strong"] = nlohmann::json::array();
    for (const auto& r : result.strong) {
        auto label = r.category.label();
        j["strong"].push_back({{"number", r.number},
                               {"pattern", format_pattern(r.pattern)},
                               {"interference", label.substr(0, 1)},
                               {"basis", label.substr(2)},
                               {"strategy", r.strategy},
                               {"new", r.new_here}});
    }
    j["weak"] = nlohmann::json::array();
    for (const auto& p : result.weak) j["weak"].push_back(format_pattern(p));
    j["demoted"] = nlohmann::json::array();
    for (const auto& p : result.demoted) j["demoted"].push_back(format_pattern(p));
    j["diff"] = result.diff;
    j["raw"] = {{"strong", result.raw_count(Effectiveness::Strong)},
                {"weak", result.raw_count(Effectiveness::Weak)},
                {"ineffective", result.raw_count(Effectiveness::Ineffective)}};
    return j.dump(2) + "\n";
}

}  // namespace ctv
