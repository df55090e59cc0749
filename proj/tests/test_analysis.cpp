#include <doctest.h>

#include <random>
#include <set>

#include "ctv/analysis.hpp"

using namespace ctv;

namespace {

SampleSet normal_set(std::array<double, 3> means, int n, std::uint64_t seed, bool with_second = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0, 5);
    SampleSet s;
    s.case_id = "fixture";
    s.run_num = n;
    for (std::size_t c = 0; c < 3; ++c)
        for (int i = 0; i < n; ++i) {
            s.first[c].push_back(means[c] + noise(rng));
            if (with_second) s.second[c].push_back(40 + noise(rng));
        }
    return s;
}

const Manifest& strong_manifest() {
    static const Manifest m = expand_cases(golden_catalog());
    return m;
}

std::vector<CaseVerdict> verdicts_for(const Manifest& m, const std::set<int>& found_types) {
    std::vector<CaseVerdict> out;
    std::set<int> done;
    for (const auto& c : m.cases) {
        CaseVerdict v;
        v.case_id = c.case_id;
        v.verdict = found_types.count(c.vuln_number) && done.insert(c.vuln_number).second ? Verdict::Found
                                                                                          : Verdict::NotFound;
        out.push_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("sample lines round trip") {
    Sample s{"v07.F-R-R.TS", Candidate::EqualsAlias, 12, 3, 215, -1};
    auto line = format_sample(s);
    CHECK(line == "v07.F-R-R.TS, ALIAS, 12, 3, 215, -1");
    CHECK(parse_sample_line(line) == s);
    auto many = parse_samples("# comment\n\n" + line + "\nv07.F-R-R.TS, NIB, 0, 0, 88.5, 41\n");
    REQUIRE(many.size() == 2);
    CHECK(many[1].candidate == Candidate::NotInBlock);
    CHECK(many[1].t_second == 41);
    CHECK_THROWS_WITH(parse_samples(line + "\nv07, DUMMY, 0, 0, 1, 1\n"), doctest::Contains("line 2"));
    CHECK_THROWS(parse_sample_line("v07, A, 0, 0, 1"));
    CHECK_THROWS(parse_sample_line("v07, A, x, 0, 1, 1"));
}

TEST_CASE("grouping sums blocks of a trial") {
    std::vector<Sample> samples;
    for (auto c : kCandidates)
        for (int t = 0; t < 3; ++t)
            for (int b = 0; b < 4; ++b) samples.push_back({"case", c, t, b, 10.0 + t, -1});
    auto sets = group_samples(samples, 3);
    REQUIRE(sets.count("case"));
    const auto& s = sets.at("case");
    CHECK(s.complete());
    CHECK(s.first[0] == std::vector<double>{40, 44, 48});
    CHECK(s.second[0].empty());
    CHECK_FALSE(group_samples(samples, 4).at("case").complete());
}

TEST_CASE("judge_case examples") {
    SUBCASE("one candidate far from the other two") {
        auto v = judge_case(normal_set({400, 100, 100}, 600, 1), false);
        CHECK(v.verdict == Verdict::Found);
        CHECK(v.candidate == Candidate::EqualsA);
        CHECK_FALSE(v.tie_break);
        CHECK(v.p[0] < kDefaultAlpha);
        CHECK(v.p[2] < kDefaultAlpha);
        CHECK(v.p[1] > kDefaultAlpha);
    }
    SUBCASE("identical distributions") {
        auto v = judge_case(normal_set({100, 100, 100}, 600, 2), false);
        CHECK(v.verdict == Verdict::NotFound);
        CHECK_FALSE(v.candidate);
    }
    SUBCASE("all three differ: largest minimum |t| wins") {
        auto v = judge_case(normal_set({100, 140, 220}, 600, 3), false);
        CHECK(v.verdict == Verdict::Found);
        CHECK(v.tie_break);
        CHECK(v.candidate == Candidate::NotInBlock);
    }
    SUBCASE("all three differ with an exact tie") {
        SampleSet s;
        s.run_num = 2;
        s.first = {std::vector<double>{0, 2}, std::vector<double>{100, 102}, std::vector<double>{200, 202}};
        auto v = judge_case(s, false);
        CHECK(v.tie_break);
        CHECK(v.verdict == Verdict::NotFound);
    }
    SUBCASE("short groups are incomplete") {
        auto s = normal_set({400, 100, 100}, 600, 4);
        s.first[2].pop_back();
        CHECK(judge_case(s, false).verdict == Verdict::Incomplete);
    }
    SUBCASE("u-last confirmation agrees") {
        auto v = judge_case(normal_set({400, 100, 100}, 600, 5, true), true);
        CHECK(v.verdict == Verdict::Found);
    }
    SUBCASE("u-last confirmation disagrees") {
        auto s = normal_set({400, 100, 100}, 600, 6, true);
        for (auto& x : s.second[0]) x += 300;  // first - second no longer singles out A
        auto v = judge_case(s, true);
        CHECK(v.verdict == Verdict::NotFound);
        CHECK_FALSE(judge_case(s, false).verdict == Verdict::NotFound);
    }
}

TEST_CASE("false-positive screen") {
    Manifest m;
    auto add = [&](const char* id, const char* pattern) {
        BenchmarkCase c;
        c.case_id = id;
        c.pattern = parse_pattern(pattern);
        if (known_approximation(c.pattern)) c.tags.emplace_back(kTagApprox);
        m.cases.push_back(c);
    };
    add("tagged", "A_a ~> V^inv ~> A_a");
    add("plain", "A_a ~> V_u ~> A_a");
    std::vector<CaseVerdict> v(2);
    v[0].case_id = "tagged";
    v[1].case_id = "plain";
    v[0].verdict = v[1].verdict = Verdict::Found;
    auto out = false_positive_screen(v, m);
    CHECK(out[0].verdict == Verdict::FoundScreened);
    CHECK_FALSE(out[0].note.empty());
    CHECK(out[1].verdict == Verdict::Found);
    CHECK(false_positive_screen({}, m).empty());
}

TEST_CASE("verdict table round trip") {
    std::vector<CaseVerdict> v(3);
    v[0] = {"a", Verdict::Found, Candidate::EqualsA, {1e-12, 0.5, 1e-9}, false, ""};
    v[1] = {"b", Verdict::NotFound, std::nullopt, {1, 1, 1}, true, "note, with comma"};
    v[2] = {"c", Verdict::Skipped, std::nullopt, {1, 1, 1}, false, "SKIP-schedule"};
    auto parsed = parse_verdicts_csv(verdicts_csv(v));
    REQUIRE(parsed.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(parsed[i].case_id == v[i].case_id);
        CHECK(parsed[i].verdict == v[i].verdict);
        CHECK(parsed[i].candidate == v[i].candidate);
        CHECK(parsed[i].tie_break == v[i].tie_break);
    }
    CHECK(parsed[1].note == "note, with comma");
    CHECK(parsed[0].p[0] == doctest::Approx(1e-12));
}

TEST_CASE("ctvs scoring") {
    const auto& m = strong_manifest();
    SUBCASE("nothing found") {
        auto r = ctvs(verdicts_for(m, {}), m);
        CHECK(r.score == 0);
        CHECK(r.types == 88);
        for (const auto& [k, ratio] : r.categories) CHECK(ratio.found == 0);
        CHECK(r.text().rfind("CTVS 0/88", 0) == 0);
    }
    SUBCASE("everything found") {
        std::set<int> all;
        for (int i = 1; i <= 88; ++i) all.insert(i);
        auto r = ctvs(verdicts_for(m, all), m);
        CHECK(r.score == 88);
        for (const auto& [k, ratio] : r.categories) CHECK(ratio.found == ratio.total);
    }
    SUBCASE("a machine with the FX-8150 category profile") {
        std::map<std::string, int> want{{"I-A", 18}, {"I-S", 1}, {"I-SA", 7}, {"E-A", 18}, {"E-S", 0}, {"E-SA", 6}};
        std::set<int> types;
        for (const auto& rec : golden_catalog())
            if (want[rec.category.label()] > 0) {
                --want[rec.category.label()];
                types.insert(rec.number);
            }
        auto r = ctvs(verdicts_for(m, types), m);
        CHECK(r.score == 50);
        CHECK(r.categories["I-A"].found == 18);
        CHECK(r.categories["I-A"].total == 20);
        CHECK(r.categories["I-S"].found == 1);
        CHECK(r.categories["I-SA"].found == 7);
        CHECK(r.categories["E-A"].found == 18);
        CHECK(r.categories["E-S"].found == 0);
        CHECK(r.categories["E-SA"].found == 6);
        CHECK(r.text().find("CTVS 50/88") != std::string::npos);
        CHECK(r.csv().find("score, CTVS, 50, 88") != std::string::npos);
    }
    SUBCASE("monotone in verdicts") {
        std::mt19937 rng(3);
        auto v = verdicts_for(m, {});
        int last = 0;
        for (int k = 0; k < 300; ++k) {
            v[rng() % v.size()].verdict = Verdict::Found;
            auto r = ctvs(v, m);
            CHECK(r.score >= last);
            int sum = 0;
            for (const auto& [key, ratio] : r.categories) sum += ratio.found;
            CHECK(sum == r.score);
            last = r.score;
        }
    }
    SUBCASE("screened and skipped cases do not count") {
        auto v = verdicts_for(m, {7});
        for (auto& x : v)
            if (x.verdict == Verdict::Found) x.verdict = Verdict::FoundScreened;
        CHECK(ctvs(v, m).score == 0);
    }
}

TEST_CASE("calibration plan reaches every class") {
    auto plan = calibration_plan();
    REQUIRE(plan.size() == 66);
    std::set<int> ids;
    for (const auto& probe : plan) {
        ids.insert(probe.timing.id());
        SetState s;
        for (const auto& step : probe.prep) s = apply_op(s, step.op, step.addr, step.core);
        CHECK(observe(s, probe.final_op, LineAddr::A, Core::Local) == probe.timing);
        CHECK(probe.prep.size() <= 6);
    }
    CHECK(ids.size() == 66);
    auto text = calibration_plan_text(plan);
    CHECK(text.find("\n13, -, R\n") != std::string::npos);
}

TEST_CASE("calibration histograms and matrix") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> l1(40, 3), dram(250, 20);
    std::string text = "# class_id, trial_index, cycles\n";
    for (int i = 0; i < 400; ++i) {
        text += "1, " + std::to_string(i) + ", " + std::to_string(l1(rng)) + "\n";
        text += "2, " + std::to_string(i) + ", " + std::to_string(l1(rng)) + "\n";
        text += "13, " + std::to_string(i) + ", " + std::to_string(dram(rng)) + "\n";
    }
    auto samples = parse_calibration_samples(text);
    CHECK(samples.size() == 3);
    auto cal = calibrate(samples);
    CHECK(cal.matrix.distinguishable(TimingClass(1), TimingClass(13)));
    CHECK_FALSE(cal.matrix.distinguishable(TimingClass(1), TimingClass(1)));
    CHECK_FALSE(cal.matrix.distinguishable(TimingClass(1), TimingClass(2)));
    CHECK_FALSE(cal.matrix.distinguishable(TimingClass(5), TimingClass(13)));  // absent class
    REQUIRE(cal.histograms.size() == 3);
    for (const auto& h : cal.histograms) {
        std::size_t total = h.overflow;
        for (auto b : h.bins) total += b;
        CHECK(total == h.count);
        CHECK(h.overflow <= h.count / 100);
    }
    CHECK(cal.histograms[2].mean == doctest::Approx(250).epsilon(0.02));
    auto csv = histograms_csv(cal.histograms);
    CHECK(csv.rfind("class_id, bin_low, count\n", 0) == 0);
    CHECK_THROWS(parse_calibration_samples("99, 0, 10\n"));
}

TEST_CASE("histogram binning puts the tail in the overflow bin") {
    std::map<int, std::vector<double>> s;
    for (int i = 0; i < 1000; ++i) s[1].push_back(10 + i % 5);
    for (int i = 0; i < 4; ++i) s[1].push_back(500);
    auto h = calibrate(s).histograms.at(0);
    CHECK(h.first_bin == 10);
    CHECK(h.bins.size() == 5);
    CHECK(h.overflow == 4);
    auto csv = histograms_csv({h});
    CHECK(csv.find("1, 15, 4\n") != std::string::npos);
}
