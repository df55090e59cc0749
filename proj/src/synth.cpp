#include "ctv/synth.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <map>
#include <random>
#include <set>

namespace ctv {

CasePrediction predict_case(const BenchmarkCase& c, const DistinguishabilityMatrix& dm, Simulator& sim) {
    CasePrediction pred;
    pred.classes = candidate_classes(c.pattern, c.ops, sim);
    pred.unique = unique_candidates(pred.classes, dm);

    auto groups = dm.groups();
    std::array<std::vector<int>, 3> g;
    for (std::size_t i = 0; i < 3; ++i) {
        for (int id = 0; id <= kTimingClassCount; ++id)
            if (pred.classes[i].test(static_cast<std::size_t>(id))) g[i].push_back(groups[static_cast<std::size_t>(id)]);
        std::sort(g[i].begin(), g[i].end());
    }
    auto intersects = [&](std::size_t i, std::size_t j) {
        return std::any_of(g[i].begin(), g[i].end(),
                           [&](int x) { return std::binary_search(g[j].begin(), g[j].end(), x); });
    };
    // Union-find over three candidates.
    std::array<std::size_t, 3> root{0, 1, 2};
    auto find = [&](std::size_t i) {
        while (root[i] != i) i = root[i];
        return i;
    };
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (intersects(i, j)) root[find(j)] = find(i);
    std::array<int, 3> lowest{};
    for (std::size_t i = 0; i < 3; ++i) {
        lowest[i] = kTimingClassCount + 1;
        for (std::size_t j = 0; j < 3; ++j)
            if (find(j) == find(i) && !g[j].empty()) lowest[i] = std::min(lowest[i], g[j].front());
    }
    std::set<int> distinct(lowest.begin(), lowest.end());
    for (std::size_t i = 0; i < 3; ++i)
        pred.rank[i] = static_cast<int>(std::distance(distinct.begin(), distinct.find(lowest[i])));
    return pred;
}

std::uint64_t case_seed(std::string_view case_id, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : case_id) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h ^ (seed * 0x9E3779B97F4A7C15ULL);
}

namespace {

SampleSet draw(const BenchmarkCase& c, const std::array<double, 3>& means, const SynthParams& params) {
    std::mt19937_64 rng(case_seed(c.case_id, params.seed));
    std::normal_distribution<double> noise(0.0, params.sigma);
    SampleSet s;
    s.case_id = c.case_id;
    s.run_num = params.run_num;
    for (std::size_t i = 0; i < 3; ++i) {
        s.first[i].reserve(static_cast<std::size_t>(params.run_num));
        for (int t = 0; t < params.run_num; ++t) s.first[i].push_back(means[i] + noise(rng));
        if (c.u_last_step())
            for (int t = 0; t < params.run_num; ++t) s.second[i].push_back(params.baseline + noise(rng));
    }
    return s;
}

}  // namespace

SampleSet synthesize(const BenchmarkCase& c, const CasePrediction& pred, const SynthParams& params) {
    std::array<double, 3> means{};
    for (std::size_t i = 0; i < 3; ++i)
        means[i] = params.base + params.spacing * pred.rank[i] * (pred.rank[i] + 1) / 2;
    return draw(c, means, params);
}

SampleSet synthesize_null(const BenchmarkCase& c, const SynthParams& params) {
    return draw(c, {params.base, params.base, params.base}, params);
}

std::vector<Sample> to_samples(const SampleSet& s) {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t t = 0; t < s.first[i].size(); ++t)
            out.push_back(Sample{s.case_id, kCandidates[i], static_cast<int>(t), 0, s.first[i][t],
                                 t < s.second[i].size() ? s.second[i][t] : -1.0});
    return out;
}

std::string ValidationSummary::text() const {
    std::string out = fmt::format("validation: {} cases, {} Found, {} Found-Screened (alpha {:.3g})\n", cases, found,
                                  screened, alpha);
    out += fmt::format("uncovered: {}\n", uncovered.size());
    for (const auto& id : uncovered) out += fmt::format("  {}\n", id);
    out += fmt::format("uncovered at manifest alpha: {}\n", uncovered_at_raw_alpha);
    return out;
}

ValidationSummary summarize_validation(const Manifest& suite, const std::vector<CaseVerdict>& screened_at_raw,
                                       const std::vector<CaseVerdict>& screened_at_corrected,
                                       const std::vector<Effectiveness>& raw, double corrected_alpha) {
    ValidationSummary out;
    out.cases = static_cast<int>(suite.cases.size());
    out.alpha = corrected_alpha;
    std::map<std::string_view, const BenchmarkCase*> by_id;
    for (const auto& c : suite.cases) by_id.emplace(c.case_id, &c);
    auto uncovered = [&](const CaseVerdict& v) {
        if (v.verdict != Verdict::Found) return false;
        auto it = by_id.find(v.case_id);
        return it != by_id.end() && raw.at(pattern_index(it->second->pattern)) == Effectiveness::Ineffective;
    };
    for (const auto& v : screened_at_corrected) {
        out.found += v.verdict == Verdict::Found ? 1 : 0;
        out.screened += v.verdict == Verdict::FoundScreened ? 1 : 0;
        if (uncovered(v)) out.uncovered.push_back(v.case_id);
    }
    out.uncovered_at_raw_alpha =
        static_cast<int>(std::count_if(screened_at_raw.begin(), screened_at_raw.end(), uncovered));
    return out;
}

}  // namespace ctv
