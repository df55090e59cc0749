#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctv/casegen.hpp"
#include "ctv/stats.hpp"

namespace ctv {

inline constexpr double kDefaultAlpha = 0.0005;

// One line of the sample format:
// case_id, candidate{A|ALIAS|NIB}, trial_index, block_index, t_first, t_second_or_-1
struct Sample {
    std::string case_id;
    Candidate candidate{};
    int trial = 0;
    int block = 0;
    double t_first = 0;
    double t_second = -1;

    bool operator==(const Sample&) const = default;
};

std::string format_sample(const Sample& s);
Sample parse_sample_line(std::string_view line);
// Skips blank lines and '#' comments; throws std::runtime_error with the
// line number on malformed input.
std::vector<Sample> parse_samples(const std::string& text);

// Per-trial values for one case; blocks of a trial are summed.
struct SampleSet {
    std::string case_id;
    int run_num = 0;
    std::array<std::vector<double>, 3> first;   // indexed by Candidate
    std::array<std::vector<double>, 3> second;  // empty when t_second is -1
    bool complete() const;
};

std::map<std::string, SampleSet> group_samples(const std::vector<Sample>& samples, int run_num);

enum class Verdict { Found, FoundScreened, NotFound, Incomplete, Skipped };
std::string_view verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(std::string_view name);

struct CaseVerdict {
    std::string case_id;
    Verdict verdict = Verdict::NotFound;
    std::optional<Candidate> candidate;
    std::array<double, 3> p{1, 1, 1};  // A-ALIAS, ALIAS-NIB, A-NIB on t_first
    bool tie_break = false;            // all three pairs differed
    std::string note;
};

// Found iff exactly one candidate differs from both others at alpha. When
// all three pairs differ, the candidate with the largest minimum |t| wins;
// an exact tie gives NotFound. With u_last_step and second timings present,
// the first-minus-second differences must single out the same candidate.
CaseVerdict judge_case(const SampleSet& s, bool u_last_step, double alpha = kDefaultAlpha);

// Found on known-approximation cases becomes FoundScreened.
std::vector<CaseVerdict> false_positive_screen(std::vector<CaseVerdict> verdicts, const Manifest& manifest);

std::string verdicts_csv(const std::vector<CaseVerdict>& verdicts);
std::vector<CaseVerdict> parse_verdicts_csv(const std::string& text);

struct Ratio {
    int found = 0;
    int total = 0;
};

struct CtvsReport {
    int score = 0;
    int types = 0;
    std::map<std::string, Ratio> categories;     // "I-A" .. "E-SA"
    std::map<int, Ratio> per_type;               // vuln number -> cases found / cases
    std::map<std::string, Ratio> by_final_op;    // R, W, RW, F
    std::map<std::string, Ratio> by_schedule;    // TS, HT, DC, VO

    std::string text() const;
    std::string csv() const;
};

// Score = number of catalog types with at least one Found case.
CtvsReport ctvs(const std::vector<CaseVerdict>& verdicts, const Manifest& manifest,
                const std::vector<VulnerabilityRecord>& catalog = golden_catalog());

// Timing calibration ------------------------------------------------------

struct CalibrationStep {
    MemOp op{};  // Read, Write or FlushLine
    LineAddr addr{};
    Core core = Core::Local;
};

// Preparation from the empty set reaching a movement type for line a, then
// the timed operation from the local core.
struct CalibrationProbe {
    TimingClass timing;
    std::vector<CalibrationStep> prep;
    ObsOp final_op{};
};

// Shortest preparation per class, found by breadth-first search.
std::vector<CalibrationProbe> calibration_plan();
std::string calibration_plan_text(const std::vector<CalibrationProbe>& plan);

struct Histogram {
    TimingClass timing;
    double mean = 0;
    std::size_t count = 0;
    long first_bin = 0;                // lowest 1-cycle bin
    std::vector<std::size_t> bins;     // 1-cycle bins up to the 99.5th percentile
    std::size_t overflow = 0;          // samples above the last bin
};

struct Calibration {
    std::vector<Histogram> histograms;  // classes with samples, by id
    DistinguishabilityMatrix matrix;    // separable iff Welch p < alpha
};

// Input lines: "class_id, trial_index, cycles".
std::map<int, std::vector<double>> parse_calibration_samples(const std::string& text);
Calibration calibrate(const std::map<int, std::vector<double>>& samples, double alpha = kDefaultAlpha);
// Rows "class_id, bin_low, count"; the overflow bin follows the last 1-cycle bin.
std::string histograms_csv(const std::vector<Histogram>& histograms);

}  // namespace ctv
