#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctv/analysis.hpp"

namespace ctv {

// Timing model for samples synthesized from simulator predictions.
struct SynthParams {
    double base = 100;     // mean of the lowest component
    double spacing = 40;   // gap between the lowest two components; the next gap is twice this
    double sigma = 5;
    double baseline = 40;  // mean of the second (L1-hit) timing
    int run_num = 600;
    std::uint64_t seed = 1;
};

struct CasePrediction {
    CandidateClasses classes;
    std::array<int, 3> rank{};           // component rank by smallest class group
    std::vector<Candidate> unique;       // candidates the timing singles out

    bool strong() const { return !unique.empty(); }
};

// Candidates whose class-group sets intersect form one component and share a
// mean. Components are ranked by their smallest group; unequal gaps between
// the three possible means keep the all-different tie-break unambiguous.
CasePrediction predict_case(const BenchmarkCase& c, const DistinguishabilityMatrix& dm, Simulator& sim);

// Stable per-case seed: FNV-1a over the case id mixed with params.seed.
std::uint64_t case_seed(std::string_view case_id, std::uint64_t seed);

SampleSet synthesize(const BenchmarkCase& c, const CasePrediction& pred, const SynthParams& params);
// All three candidates drawn from one distribution.
SampleSet synthesize_null(const BenchmarkCase& c, const SynthParams& params);

// Sample lines for a set (block 0, one line per trial).
std::vector<Sample> to_samples(const SampleSet& s);

struct ValidationSummary {
    int cases = 0;
    int found = 0;
    int screened = 0;
    double alpha = 0;                          // per-case alpha actually applied
    std::vector<std::string> uncovered;        // unscreened Found on raw-Ineffective patterns
    int uncovered_at_raw_alpha = 0;            // same count at the manifest alpha

    std::string text() const;
};

// Covered = raw Strong or raw Weak before reductions, which includes the
// relabel and redundancy repeats. Validation applies alpha / cases.
ValidationSummary summarize_validation(const Manifest& suite, const std::vector<CaseVerdict>& screened_at_raw,
                                       const std::vector<CaseVerdict>& screened_at_corrected,
                                       const std::vector<Effectiveness>& raw, double corrected_alpha);

}  // namespace ctv
