#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ctv/derivation.hpp"

namespace ctv {

enum class Schedule { SameCoreTimeSliced, SameCoreHyperThreaded, DifferentCores, VictimOnly };
inline constexpr std::array<Schedule, 4> kSchedules{Schedule::SameCoreTimeSliced, Schedule::SameCoreHyperThreaded,
                                                   Schedule::DifferentCores, Schedule::VictimOnly};
std::string_view schedule_token(Schedule s);  // TS, HT, DC, VO
std::optional<Schedule> schedule_from_token(std::string_view token);

// Exit codes of generated programs (mirrors harness/include/ctv_harness.h).
enum class ProgramExit : int { Ok = 0, Usage = 2, SkipSchedule = 10, SkipCapability = 11, SequenceTimeout = 12 };

struct BenchmarkCase {
    std::string case_id;
    int vuln_number = 0;  // 0 outside the Strong catalog
    Pattern pattern;
    OperationVariant ops;
    Schedule schedule{};
    std::vector<std::string> tags;

    bool u_last_step() const { return is_secret(pattern[2]); }
    bool has_tag(std::string_view tag) const;
    std::array<Core, 3> cores() const;
};

inline constexpr std::string_view kTagApprox = "approx";
inline constexpr std::string_view kTagULast = "u-last";

struct ManifestParams {
    int run_num = 600;
    int blocks = 8;
    double alpha = 0.0005;
};

struct Manifest {
    ManifestParams params;
    std::vector<BenchmarkCase> cases;

    const BenchmarkCase* find(std::string_view case_id) const;
};

// Case-level operation choices: access -> {R, W}; every invalidation,
// including whole-cache, -> {F, RW}; unknown state -> {X}.
std::vector<OperationVariant> case_variants(const Pattern& p);

// Core running step i (0-based). Steps 1-2: RW on the remote core. Step 3:
// F on the remote core. Everything else on the local core.
Core step_core(std::size_t step, StepOp op);

// VO when every actor is the victim; TS and HT when some core hosts both
// actors; DC otherwise.
std::vector<Schedule> schedules_for(const Pattern& p, const OperationVariant& v);

// Step 2 or 3 is a whole-cache invalidation or the unknown state.
bool known_approximation(const Pattern& p);

std::string case_id_for(int vuln_number, const Pattern& p, const OperationVariant& v, Schedule s);

class CatalogMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws CatalogMismatch unless catalog equals the golden Strong catalog.
Manifest expand_cases(const std::vector<VulnerabilityRecord>& catalog, const ManifestParams& params = {});
// All 4913 patterns with the same variant rules.
Manifest emit_validation_suite(const ManifestParams& params = {});

std::string manifest_text(const Manifest& m);
Manifest parse_manifest(const std::string& text);

// C source for one case, shaped after the published #42 benchmark listing.
std::string emit_benchmark_source(const BenchmarkCase& c, const ManifestParams& params = {});

// Text of harness/include/ctv_harness.h, embedded at build time.
std::string_view harness_header_text();

}  // namespace ctv
