#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "ctv/casegen.hpp"

using namespace ctv;
namespace fs = std::filesystem;

namespace {

const Manifest& strong_manifest() {
    static const Manifest m = expand_cases(derive_catalog().strong);
    return m;
}

const Manifest& validation_manifest() {
    static const Manifest m = emit_validation_suite();
    return m;
}

}  // namespace

TEST_CASE("case expansion counts") {
    const auto& m = strong_manifest();
    CHECK(m.cases.size() == 1094);

    std::map<int, int> per_type;
    std::map<std::string, int> final_op, schedule;
    for (const auto& c : m.cases) {
        ++per_type[c.vuln_number];
        ++final_op[std::string(step_op_token(c.ops.ops[2]))];
        ++schedule[std::string(schedule_token(c.schedule))];
    }
    CHECK(per_type.size() == 88);
    for (const auto& [n, count] : per_type) {
        CHECK(count >= 8);
        CHECK(count <= 16);
    }
    CHECK(final_op == std::map<std::string, int>{{"R", 277}, {"W", 277}, {"RW", 277}, {"F", 263}});
    CHECK(schedule == std::map<std::string, int>{{"TS", 390}, {"HT", 390}, {"DC", 90}, {"VO", 224}});
}

TEST_CASE("case ids are unique and stable") {
    const auto& m = strong_manifest();
    std::set<std::string> ids;
    for (const auto& c : m.cases) ids.insert(c.case_id);
    CHECK(ids.size() == m.cases.size());
    CHECK(ids.count("v42.R-W-W.HT"));
    CHECK(m.find("v42.R-W-W.HT")->pattern == parse_pattern("V_u ~> A_a ~> V_u"));
    CHECK(expand_cases(derive_catalog().strong).cases.front().case_id == m.cases.front().case_id);
}

TEST_CASE("expansion refuses a catalog that differs from the golden one") {
    auto catalog = golden_catalog();
    catalog.pop_back();
    CHECK_THROWS_AS(expand_cases(catalog), CatalogMismatch);
    catalog = golden_catalog();
    catalog[3].category.basis = Basis::Set;
    CHECK_THROWS_AS(expand_cases(catalog), CatalogMismatch);
}

TEST_CASE("placement and schedule rules") {
    CHECK(step_core(0, StepOp::RemoteWrite) == Core::Remote);
    CHECK(step_core(1, StepOp::Read) == Core::Local);
    CHECK(step_core(2, StepOp::Flush) == Core::Remote);
    CHECK(step_core(2, StepOp::RemoteWrite) == Core::Local);

    auto victim_only = parse_pattern("V_u ~> V_a ~> V_u");
    CHECK(schedules_for(victim_only, {{StepOp::Read, StepOp::Read, StepOp::Read}}) ==
          std::vector<Schedule>{Schedule::VictimOnly});
    auto shared = parse_pattern("A_a ~> V_u ~> A_a");
    CHECK(schedules_for(shared, {{StepOp::Read, StepOp::Read, StepOp::Read}}) ==
          std::vector<Schedule>{Schedule::SameCoreTimeSliced, Schedule::SameCoreHyperThreaded});
}

TEST_CASE("manifest round trip") {
    Manifest m = strong_manifest();
    m.params.run_num = 123;
    auto parsed = parse_manifest(manifest_text(m));
    CHECK(parsed.params.run_num == 123);
    CHECK(parsed.params.blocks == 8);
    REQUIRE(parsed.cases.size() == m.cases.size());
    for (std::size_t i = 0; i < m.cases.size(); ++i) {
        CHECK(parsed.cases[i].case_id == m.cases[i].case_id);
        CHECK(parsed.cases[i].pattern == m.cases[i].pattern);
        CHECK(parsed.cases[i].ops == m.cases[i].ops);
        CHECK(parsed.cases[i].schedule == m.cases[i].schedule);
        CHECK(parsed.cases[i].tags == m.cases[i].tags);
    }
    CHECK(manifest_text(parsed) == manifest_text(m));
    CHECK_THROWS(parse_manifest("v01.R-R-R.TS, 1, A_a ~> V_u\n"));
}

TEST_CASE("emitted source is deterministic and follows the case") {
    const auto& c = *strong_manifest().find("v42.R-W-W.HT");
    auto src = emit_benchmark_source(c);
    CHECK(src == emit_benchmark_source(c));
    CHECK(src.find("#define U_LAST 1") != std::string::npos);
    CHECK(src.find("ctv_spawn(ctx, proc1)") != std::string::npos);
    CHECK(src.find("CTV_SLOT_LOCAL_SIBLING") != std::string::npos);
    CHECK(src.find("t_second = (int64_t)ctv_timed(ctx, CTV_WRITE") != std::string::npos);
}

TEST_CASE("whole-cache final step is emitted as a marked approximation") {
    auto p = parse_pattern("A_a ~> V_u ~> A^inv");
    const auto* c = validation_manifest().find(case_id_for(0, p, {{StepOp::Read, StepOp::Read, StepOp::Flush}},
                                                           Schedule::SameCoreTimeSliced));
    REQUIRE(c != nullptr);
    auto src = emit_benchmark_source(*c);
    CHECK(src.find("ctv_timed_flush_all") != std::string::npos);
    CHECK(src.find("approximation") != std::string::npos);
}

TEST_CASE("validation suite") {
    const auto& v = validation_manifest();
    std::set<Pattern> patterns;
    for (const auto& c : v.cases) {
        patterns.insert(c.pattern);
        CHECK(c.has_tag(kTagApprox) == known_approximation(c.pattern));
        CHECK(c.has_tag(kTagULast) == is_secret(c.pattern[2]));
    }
    CHECK(patterns.size() == 4913);

    auto approx = [](State s) { return s == State::A_inv || s == State::V_inv || s == State::Star; };
    for (const auto& p : enumerate_patterns()) CHECK(known_approximation(p) == (approx(p[1]) || approx(p[2])));

    std::set<std::string> ids;
    for (const auto& c : v.cases) ids.insert(c.case_id);
    for (const auto& c : strong_manifest().cases) CHECK(ids.count(c.case_id));
}

TEST_CASE("embedded harness header matches the runtime header") {
    std::ifstream in(CTV_HARNESS_HEADER_FILE);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(harness_header_text() == text);
}

TEST_CASE("generated sources compile against the harness header") {
    auto dir = fs::temp_directory_path() / "ctv_casegen_compile";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string files;
    for (const auto& c : strong_manifest().cases) {
        std::ofstream(dir / (c.case_id + ".c")) << emit_benchmark_source(c);
        files += " " + (dir / (c.case_id + ".c")).string();
    }
    for (const char* id : {"A_a ~> V_u ~> A^inv", "star ~> V_u ~> star", "A^inv ~> V^inv ~> V_u"}) {
        auto p = parse_pattern(id);
        for (const auto& c : validation_manifest().cases)
            if (c.pattern == p) {
                std::ofstream(dir / (c.case_id + ".c")) << emit_benchmark_source(c);
                files += " " + (dir / (c.case_id + ".c")).string();
            }
    }
    auto cmd = std::string(CTV_TEST_CC) + " -std=c11 -Wall -Wextra -Werror -fsyntax-only -I" +
               fs::path(CTV_HARNESS_HEADER_FILE).parent_path().string() + files;
    CHECK(std::system(cmd.c_str()) == 0);
    fs::remove_all(dir);
}
